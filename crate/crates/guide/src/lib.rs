//! The user guide's chapters, compiled as doc-tests so every snippet in
//! `book/` keeps building against the current API. Run with
//! `cargo test -p ustar-guide --doc`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/efficient-rate.md")]
pub mod efficient_rate {}
#[doc = include_str!("../../../book/src/datasets.md")]
pub mod datasets {}
#[doc = include_str!("../../../book/src/beveridge-breaks.md")]
pub mod beveridge_breaks {}
#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
