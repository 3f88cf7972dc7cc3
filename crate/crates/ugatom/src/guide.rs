//! The book chapters, included as doc comments so that `cargo test --doc`
//! compiles and runs every code snippet in `book/src/`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/constants.md")]
pub mod constants {}

#[doc = include_str!("../../../book/src/environment.md")]
pub mod environment {}

#[doc = include_str!("../../../book/src/levels.md")]
pub mod levels {}

#[doc = include_str!("../../../book/src/redshift.md")]
pub mod redshift {}

#[doc = include_str!("../../../book/src/splitting.md")]
pub mod splitting {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
