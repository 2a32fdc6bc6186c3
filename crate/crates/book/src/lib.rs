//! The guide in `book/` as doc-tests: one module per chapter, so a failing
//! snippet names its chapter.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}
#[doc = include_str!("../../../book/src/rings.md")]
pub mod rings {}
#[doc = include_str!("../../../book/src/words.md")]
pub mod words {}
#[doc = include_str!("../../../book/src/modules.md")]
pub mod modules {}
#[doc = include_str!("../../../book/src/witt.md")]
pub mod witt {}
#[doc = include_str!("../../../book/src/symbol.md")]
pub mod symbol {}
#[doc = include_str!("../../../book/src/completion.md")]
pub mod completion {}
#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}
#[doc = include_str!("../../../book/src/formats.md")]
pub mod formats {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
