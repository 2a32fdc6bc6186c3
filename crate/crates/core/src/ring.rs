//! Exact commutative rings: Z, Q, Z/n, F_p and polynomial rings over them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Shared handle to a ring; every element carries one.
pub type Ring = Arc<RingSpec>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    Rationals,
    IntegersMod(BigInt),
    PrimeField(BigInt),
    /// Polynomials over a non-polynomial base. `Z[x][y]` is flattened to `Z[x,y]`.
    Polynomial { base: Box<RingSpec>, vars: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Value {
    Int(BigInt),
    Rat(BigRational),
    /// exponent vector -> nonzero coefficient in the base ring
    Poly(BTreeMap<Vec<u32>, Value>),
}

#[derive(Clone, Debug)]
pub struct Elem {
    ring: Ring,
    v: Value,
}

fn is_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let p = BigInt::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    // Miller-Rabin with the first thirteen prime bases; deterministic far past u64.
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut r = 0u32;
    while d.is_even() {
        d >>= 1;
        r += 1;
    }
    'bases: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..r {
            x = x.modpow(&BigInt::from(2), n);
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g, g >= 0.
pub(crate) fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

impl RingSpec {
    pub fn parse(text: &str) -> Result<RingSpec> {
        let text = text.trim();
        let (base_text, mut rest) = match text.find('[') {
            Some(i) => (&text[..i], &text[i..]),
            None => (text, ""),
        };
        let base = match base_text.trim() {
            "Z" => RingSpec::Integers,
            "Q" => RingSpec::Rationals,
            t if t.starts_with("Z/") => {
                let n: BigInt = t[2..]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad modulus in {t:?}")))?;
                if n < BigInt::from(2) {
                    return Err(Error::InvalidRing(format!("modulus {n} is below 2")));
                }
                RingSpec::IntegersMod(n)
            }
            t if t.starts_with("F_") => {
                let p: BigInt = t[2..]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad characteristic in {t:?}")))?;
                if !is_prime(&p) {
                    return Err(Error::InvalidRing(format!("{p} is not prime")));
                }
                RingSpec::PrimeField(p)
            }
            t => return Err(Error::Parse(format!("unknown ring {t:?}"))),
        };
        let mut vars: Vec<String> = Vec::new();
        while !rest.is_empty() {
            let rest_t = rest.trim_start();
            if !rest_t.starts_with('[') {
                return Err(Error::Parse(format!("unexpected {rest_t:?} in ring spec")));
            }
            let close = rest_t
                .find(']')
                .ok_or_else(|| Error::Parse("unclosed '[' in ring spec".into()))?;
            for v in rest_t[1..close].split(',') {
                let v = v.trim();
                let valid = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                    && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                if !valid {
                    return Err(Error::Parse(format!("bad variable name {v:?}")));
                }
                if vars.iter().any(|w| w == v) {
                    return Err(Error::Parse(format!("repeated variable {v:?}")));
                }
                vars.push(v.to_string());
            }
            rest = &rest_t[close + 1..];
        }
        if vars.is_empty() {
            Ok(base)
        } else {
            Ok(RingSpec::Polynomial { base: Box::new(base), vars })
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RingSpec::IntegersMod(_) | RingSpec::PrimeField(_))
    }

    /// Modulus of Z/n or F_p.
    pub fn modulus(&self) -> Option<&BigInt> {
        match self {
            RingSpec::IntegersMod(n) | RingSpec::PrimeField(n) => Some(n),
            _ => None,
        }
    }

    fn base(&self) -> &RingSpec {
        match self {
            RingSpec::Polynomial { base, .. } => base,
            r => r,
        }
    }

    fn nvars(&self) -> usize {
        match self {
            RingSpec::Polynomial { vars, .. } => vars.len(),
            _ => 0,
        }
    }

    fn is_field(&self) -> bool {
        matches!(self, RingSpec::Rationals | RingSpec::PrimeField(_))
    }

    // ---- base-ring value arithmetic ----

    fn b_from_int(&self, n: BigInt) -> Value {
        match self {
            RingSpec::Rationals => Value::Rat(BigRational::from_integer(n)),
            RingSpec::IntegersMod(m) | RingSpec::PrimeField(m) => Value::Int(n.mod_floor(m)),
            _ => Value::Int(n),
        }
    }

    fn b_is_zero(&self, v: &Value) -> bool {
        match v {
            Value::Int(x) => x.is_zero(),
            Value::Rat(x) => x.is_zero(),
            Value::Poly(m) => m.is_empty(),
        }
    }

    fn b_add(&self, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Int(x), Value::Int(y)) => self.b_from_int(x + y),
            (Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            _ => unreachable!("mixed base values"),
        }
    }

    fn b_neg(&self, a: &Value) -> Value {
        match a {
            Value::Int(x) => self.b_from_int(-x),
            Value::Rat(x) => Value::Rat(-x),
            _ => unreachable!(),
        }
    }

    fn b_mul(&self, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Int(x), Value::Int(y)) => self.b_from_int(x * y),
            (Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
            _ => unreachable!("mixed base values"),
        }
    }

    fn b_inverse(&self, a: &Value) -> Option<Value> {
        match (self, a) {
            (RingSpec::Integers, Value::Int(x)) => {
                if x.abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            (RingSpec::Rationals, Value::Rat(x)) => {
                if x.is_zero() {
                    None
                } else {
                    Some(Value::Rat(x.recip()))
                }
            }
            (RingSpec::IntegersMod(n) | RingSpec::PrimeField(n), Value::Int(x)) => {
                let (g, s, _) = ext_gcd(x, n);
                if g.is_one() {
                    Some(Value::Int(s.mod_floor(n)))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn b_is_nilpotent(&self, a: &Value) -> bool {
        match (self, a) {
            (RingSpec::IntegersMod(n), Value::Int(x)) => {
                let k = n.bits() as u32;
                x.modpow(&BigInt::from(k.max(1)), n).is_zero()
            }
            _ => self.b_is_zero(a),
        }
    }

    // ---- full values (polynomial-aware) ----

    fn zero_value(&self) -> Value {
        match self {
            RingSpec::Polynomial { .. } => Value::Poly(BTreeMap::new()),
            r => r.b_from_int(BigInt::zero()),
        }
    }

    fn from_int_value(&self, n: BigInt) -> Value {
        match self {
            RingSpec::Polynomial { base, vars } => {
                let c = base.b_from_int(n);
                let mut m = BTreeMap::new();
                if !base.b_is_zero(&c) {
                    m.insert(vec![0; vars.len()], c);
                }
                Value::Poly(m)
            }
            r => r.b_from_int(n),
        }
    }

    fn add_values(&self, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Poly(x), Value::Poly(y)) => {
                let base = self.base();
                let mut out = x.clone();
                for (k, c) in y {
                    match out.get_mut(k) {
                        Some(d) => {
                            let s = base.b_add(d, c);
                            if base.b_is_zero(&s) {
                                out.remove(k);
                            } else {
                                *d = s;
                            }
                        }
                        None => {
                            out.insert(k.clone(), c.clone());
                        }
                    }
                }
                Value::Poly(out)
            }
            _ => self.b_add(a, b),
        }
    }

    fn neg_value(&self, a: &Value) -> Value {
        match a {
            Value::Poly(x) => {
                let base = self.base();
                Value::Poly(x.iter().map(|(k, c)| (k.clone(), base.b_neg(c))).collect())
            }
            _ => self.b_neg(a),
        }
    }

    fn mul_values(&self, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Poly(x), Value::Poly(y)) => {
                let base = self.base();
                let mut out: BTreeMap<Vec<u32>, Value> = BTreeMap::new();
                for (kx, cx) in x {
                    for (ky, cy) in y {
                        let k: Vec<u32> = kx.iter().zip(ky).map(|(i, j)| i + j).collect();
                        let p = base.b_mul(cx, cy);
                        if base.b_is_zero(&p) {
                            continue;
                        }
                        match out.get_mut(&k) {
                            Some(d) => *d = base.b_add(d, &p),
                            None => {
                                out.insert(k, p);
                            }
                        }
                    }
                }
                out.retain(|_, c| !base.b_is_zero(c));
                Value::Poly(out)
            }
            _ => self.b_mul(a, b),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Rationals => write!(f, "Q"),
            RingSpec::IntegersMod(n) => write!(f, "Z/{n}"),
            RingSpec::PrimeField(p) => write!(f, "F_{p}"),
            RingSpec::Polynomial { base, vars } => write!(f, "{base}[{}]", vars.join(",")),
        }
    }
}

/// Parses a ring spec into a shared handle.
pub fn ring_parse(text: &str) -> Result<Ring> {
    Ok(Arc::new(RingSpec::parse(text)?))
}

// ---------------------------------------------------------------------------
// Elements

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.v == other.v
    }
}
impl Eq for Elem {}

impl Hash for Elem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.v.hash(state)
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.v.cmp(&other.v)
    }
}

impl Elem {
    pub fn zero(ring: &Ring) -> Elem {
        Elem { ring: ring.clone(), v: ring.zero_value() }
    }

    pub fn one(ring: &Ring) -> Elem {
        Elem::from_int(ring, 1)
    }

    pub fn from_int(ring: &Ring, n: i64) -> Elem {
        Elem::from_bigint(ring, BigInt::from(n))
    }

    pub fn from_bigint(ring: &Ring, n: BigInt) -> Elem {
        Elem { ring: ring.clone(), v: ring.from_int_value(n) }
    }

    /// The rational p/q in Q, or p·q⁻¹ in rings where q is a unit.
    pub fn fraction(ring: &Ring, p: BigInt, q: BigInt) -> Result<Elem> {
        if let RingSpec::Rationals = **ring {
            if q.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            return Ok(Elem { ring: ring.clone(), v: Value::Rat(BigRational::new(p, q)) });
        }
        let den = Elem::from_bigint(ring, q);
        let inv = den
            .inverse()
            .ok_or_else(|| Error::Parse(format!("denominator {den} is not a unit in {ring}")))?;
        Ok(&Elem::from_bigint(ring, p) * &inv)
    }

    /// The variable with the given index as a polynomial.
    pub fn var(ring: &Ring, index: usize) -> Result<Elem> {
        match &**ring {
            RingSpec::Polynomial { base, vars } if index < vars.len() => {
                let mut e = vec![0; vars.len()];
                e[index] = 1;
                let mut m = BTreeMap::new();
                m.insert(e, base.b_from_int(BigInt::one()));
                Ok(Elem { ring: ring.clone(), v: Value::Poly(m) })
            }
            _ => Err(Error::Precondition(format!("no variable {index} in {ring}"))),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.ring.b_is_zero(&self.v)
    }

    pub fn is_one(&self) -> bool {
        *self == Elem::one(&self.ring)
    }

    fn same_ring(&self, other: &Elem) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "ring mismatch: {} vs {}",
            self.ring,
            other.ring
        );
    }

    fn with(&self, v: Value) -> Elem {
        Elem { ring: self.ring.clone(), v }
    }

    pub fn pow(&self, mut e: u64) -> Elem {
        let mut acc = Elem::one(&self.ring);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// Inverse if the element is a unit. The result is checked by multiplication.
    pub fn inverse(&self) -> Option<Elem> {
        let inv = match &self.v {
            Value::Poly(m) => {
                let base = self.ring.base();
                let zero_exp = vec![0u32; self.ring.nvars()];
                let c0 = m.get(&zero_exp)?;
                let c0_inv = base.b_inverse(c0)?;
                if !m.iter().all(|(k, c)| *k == zero_exp || base.b_is_nilpotent(c)) {
                    return None;
                }
                // self = c0 (1 + n) with n nilpotent; invert by the finite geometric series.
                let c0_inv_e = self.with(Value::Poly(BTreeMap::from([(zero_exp.clone(), c0_inv)])));
                let n = &(&c0_inv_e * self) - &Elem::one(&self.ring);
                let mut sum = Elem::one(&self.ring);
                let mut term = Elem::one(&self.ring);
                let minus_n = -&n;
                loop {
                    term = &term * &minus_n;
                    if term.is_zero() {
                        break;
                    }
                    sum = &sum + &term;
                }
                &sum * &c0_inv_e
            }
            v => self.with(self.ring.b_inverse(v)?),
        };
        if (&inv * self).is_one() {
            Some(inv)
        } else {
            None
        }
    }

    /// Inverse if the element is a unit (the `is_unit` operation).
    pub fn is_unit(&self) -> Option<Elem> {
        self.inverse()
    }

    /// Integer value for Z, or the representative in [0, n) for Z/n and F_p.
    pub fn as_bigint(&self) -> Option<&BigInt> {
        match &self.v {
            Value::Int(x) => Some(x),
            _ => None,
        }
    }

    /// Residue as a small integer, for finite-ring enumeration.
    pub fn as_u64(&self) -> Option<u64> {
        self.as_bigint().and_then(|x| x.to_u64())
    }

    /// Total degree for polynomials, 0 for constants; None for the zero polynomial.
    fn poly_degree(&self) -> Option<u32> {
        match &self.v {
            Value::Poly(m) => m.keys().map(|k| k.iter().sum()).max(),
            _ => None,
        }
    }

    /// Size used by Euclidean reduction; smaller is closer to a unit.
    pub(crate) fn euclid_size(&self) -> Option<BigInt> {
        match (&*self.ring, &self.v) {
            (_, v) if self.ring.b_is_zero(v) => Some(BigInt::zero()),
            (RingSpec::Integers, Value::Int(x)) => Some(x.abs()),
            (RingSpec::IntegersMod(_), Value::Int(x)) => Some(x.clone()),
            (RingSpec::PrimeField(_) | RingSpec::Rationals, _) => Some(BigInt::one()),
            (RingSpec::Polynomial { base, vars }, _) if vars.len() == 1 && base.is_field() => {
                Some(BigInt::from(self.poly_degree().unwrap_or(0)) + 1)
            }
            _ => None,
        }
    }

    /// q with euclid_size(self - q*d) < euclid_size(d), for d nonzero.
    pub(crate) fn euclid_quotient(&self, d: &Elem) -> Option<Elem> {
        self.same_ring(d);
        match (&*self.ring, &self.v, &d.v) {
            (RingSpec::Integers | RingSpec::IntegersMod(_), Value::Int(x), Value::Int(y)) => {
                Some(Elem::from_bigint(&self.ring, x.div_floor(y)))
            }
            (RingSpec::PrimeField(_) | RingSpec::Rationals, _, _) => Some(self * &d.inverse()?),
            (RingSpec::Polynomial { base, vars }, _, _) if vars.len() == 1 && base.is_field() => {
                let (q, _) = uni_divmod(self, d)?;
                Some(q)
            }
            _ => None,
        }
    }
}

// ---- univariate polynomial helpers (single variable, field base) ----

fn uni_coeffs(e: &Elem) -> Vec<Value> {
    let base = e.ring.base();
    match &e.v {
        Value::Poly(m) => {
            let deg = m.keys().map(|k| k[0]).max().map(|d| d as usize + 1).unwrap_or(0);
            let mut out = vec![base.b_from_int(BigInt::zero()); deg];
            for (k, c) in m {
                out[k[0] as usize] = c.clone();
            }
            out
        }
        _ => unreachable!(),
    }
}

fn uni_from(ring: &Ring, coeffs: &[Value]) -> Elem {
    let base = ring.base();
    let mut m = BTreeMap::new();
    for (i, c) in coeffs.iter().enumerate() {
        if !base.b_is_zero(c) {
            m.insert(vec![i as u32], c.clone());
        }
    }
    Elem { ring: ring.clone(), v: Value::Poly(m) }
}

fn uni_divmod(a: &Elem, d: &Elem) -> Option<(Elem, Elem)> {
    let base = a.ring.base();
    let dc = uni_coeffs(d);
    let lead_inv = base.b_inverse(dc.last()?)?;
    let mut r = uni_coeffs(a);
    let mut q = vec![base.b_from_int(BigInt::zero()); r.len().max(1)];
    while r.len() >= dc.len() {
        let shift = r.len() - dc.len();
        let c = base.b_mul(r.last().unwrap(), &lead_inv);
        for (i, dci) in dc.iter().enumerate() {
            r[shift + i] = base.b_add(&r[shift + i], &base.b_neg(&base.b_mul(&c, dci)));
        }
        q[shift] = c;
        while r.last().is_some_and(|x| base.b_is_zero(x)) {
            r.pop();
        }
    }
    Some((uni_from(&a.ring, &q), uni_from(&a.ring, &r)))
}

/// Bézout coefficients for a row: b with Σ aᵢbᵢ = 1.
pub fn bezout_witness(row: &[Elem]) -> Result<Vec<Elem>> {
    let ring = match row.first() {
        Some(x) => x.ring.clone(),
        None => return Err(Error::NotUnimodular),
    };
    let mut out = vec![Elem::zero(&ring); row.len()];
    for (i, x) in row.iter().enumerate() {
        x.same_ring(&row[0]);
        if let Some(inv) = x.inverse() {
            out[i] = inv;
            return Ok(out);
        }
    }
    let coeffs = match &*ring {
        RingSpec::Integers => {
            let (g, c) = int_bezout(row.iter().map(|x| x.as_bigint().unwrap().clone()))?;
            if !g.is_one() {
                return Err(Error::NotUnimodular);
            }
            c.into_iter().map(|x| Elem::from_bigint(&ring, x)).collect()
        }
        RingSpec::IntegersMod(n) | RingSpec::PrimeField(n) => {
            let lifts = row.iter().map(|x| x.as_bigint().unwrap().clone()).chain([n.clone()]);
            let (g, mut c) = int_bezout(lifts)?;
            if !g.is_one() {
                return Err(Error::NotUnimodular);
            }
            c.pop();
            c.into_iter().map(|x| Elem::from_bigint(&ring, x)).collect()
        }
        // Every nonzero rational is a unit, caught above.
        RingSpec::Rationals => return Err(Error::NotUnimodular),
        RingSpec::Polynomial { base, vars } if vars.len() == 1 && base.is_field() => {
            let mut g = row[0].clone();
            let mut c: Vec<Elem> = vec![Elem::zero(&ring); row.len()];
            c[0] = Elem::one(&ring);
            for (i, x) in row.iter().enumerate().skip(1) {
                let (h, s, t) = uni_ext_gcd(&g, x)?;
                for ck in c.iter_mut().take(i) {
                    *ck = &*ck * &s;
                }
                c[i] = t;
                g = h;
            }
            let ginv = g.inverse().ok_or(Error::NotUnimodular)?;
            c.into_iter().map(|x| &x * &ginv).collect()
        }
        r => {
            return Err(Error::Unsupported(format!(
                "no unimodularity solver for {r}; supply a witness"
            )))
        }
    };
    out = coeffs;
    let check = row.iter().zip(&out).fold(Elem::zero(&ring), |acc, (a, b)| &acc + &(a * b));
    if !check.is_one() {
        return Err(Error::Verification("Bézout witness does not sum to 1".into()));
    }
    Ok(out)
}

fn int_bezout(xs: impl Iterator<Item = BigInt>) -> Result<(BigInt, Vec<BigInt>)> {
    let mut g = BigInt::zero();
    let mut c: Vec<BigInt> = Vec::new();
    for x in xs {
        let (h, s, t) = ext_gcd(&g, &x);
        for ck in c.iter_mut() {
            *ck *= &s;
        }
        c.push(t);
        g = h;
    }
    Ok((g, c))
}

fn uni_ext_gcd(a: &Elem, b: &Elem) -> Result<(Elem, Elem, Elem)> {
    let ring = a.ring.clone();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Elem::one(&ring), Elem::zero(&ring));
    let (mut t0, mut t1) = (Elem::zero(&ring), Elem::one(&ring));
    while !r1.is_zero() {
        let (q, r2) = uni_divmod(&r0, &r1).ok_or(Error::NotUnimodular)?;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &(&q * &s1);
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = &t0 - &(&q * &t1);
        t0 = std::mem::replace(&mut t1, t2);
    }
    Ok((r0, s0, t0))
}

impl Add for &Elem {
    type Output = Elem;
    fn add(self, rhs: &Elem) -> Elem {
        self.same_ring(rhs);
        self.with(self.ring.add_values(&self.v, &rhs.v))
    }
}
impl Sub for &Elem {
    type Output = Elem;
    fn sub(self, rhs: &Elem) -> Elem {
        self.same_ring(rhs);
        self.with(self.ring.add_values(&self.v, &self.ring.neg_value(&rhs.v)))
    }
}
impl Mul for &Elem {
    type Output = Elem;
    fn mul(self, rhs: &Elem) -> Elem {
        self.same_ring(rhs);
        self.with(self.ring.mul_values(&self.v, &rhs.v))
    }
}
impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        self.with(self.ring.neg_value(&self.v))
    }
}
impl Add for Elem {
    type Output = Elem;
    fn add(self, rhs: Elem) -> Elem {
        &self + &rhs
    }
}
impl Sub for Elem {
    type Output = Elem;
    fn sub(self, rhs: Elem) -> Elem {
        &self - &rhs
    }
}
impl Mul for Elem {
    type Output = Elem;
    fn mul(self, rhs: Elem) -> Elem {
        &self * &rhs
    }
}
impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Text encoding

fn fmt_base(v: &Value) -> String {
    match v {
        Value::Int(x) => x.to_string(),
        Value::Rat(x) => {
            if x.denom().is_one() {
                x.numer().to_string()
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        }
        Value::Poly(_) => unreachable!(),
    }
}

fn base_negative(v: &Value) -> bool {
    match v {
        Value::Int(x) => x.is_negative(),
        Value::Rat(x) => x.is_negative(),
        Value::Poly(_) => false,
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (m, vars) = match (&self.v, &*self.ring) {
            (Value::Poly(m), RingSpec::Polynomial { vars, .. }) => (m, vars),
            (v, _) => return write!(f, "{}", fmt_base(v)),
        };
        if m.is_empty() {
            return write!(f, "0");
        }
        let base = self.ring.base();
        // graded order, highest degree first
        let mut terms: Vec<(&Vec<u32>, &Value)> = m.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (idx, (exp, c)) in terms.into_iter().enumerate() {
            let neg = base_negative(c);
            let abs = if neg { base.b_neg(c) } else { c.clone() };
            let mono: Vec<String> = exp
                .iter()
                .zip(vars)
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            let coeff = fmt_base(&abs);
            let body = if mono.is_empty() {
                coeff
            } else if coeff == "1" {
                mono.join("*")
            } else {
                format!("{coeff}*{}", mono.join("*"))
            };
            match (idx, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

struct ElemParser<'a> {
    ring: &'a Ring,
    s: &'a [u8],
    pos: usize,
}

impl ElemParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!(
            "{what} at offset {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.s)
        )))
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected number");
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap())
    }

    fn expr(&mut self) -> Result<Elem> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Elem> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Elem> {
        let a = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.number()?;
            let e = e.to_u64().ok_or_else(|| Error::Parse("exponent too large".into()))?;
            return Ok(a.pow(e));
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<Elem> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = self.number()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let q = self.number()?;
                    return Elem::fraction(self.ring, p, q);
                }
                Ok(Elem::from_bigint(self.ring, p))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                match &**self.ring {
                    RingSpec::Polynomial { vars, .. } => match vars.iter().position(|v| v == name) {
                        Some(i) => Elem::var(self.ring, i),
                        None => self.err(&format!("unknown variable {name:?}")),
                    },
                    _ => self.err(&format!("variable {name:?} in a ring without variables")),
                }
            }
            _ => self.err("unexpected input"),
        }
    }
}

impl Elem {
    /// Parses the element text encoding: decimal, `p/q`, or `3*x^2*y - 1`.
    pub fn parse(ring: &Ring, text: &str) -> Result<Elem> {
        let mut p = ElemParser { ring, s: text.as_bytes(), pos: 0 };
        let e = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(e)
    }
}
