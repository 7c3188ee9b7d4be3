// The book chapters, compiled as doc-tests so that every snippet in the guide runs under
// `cargo test`. One module per chapter keeps failures traceable to a file.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}
#[doc = include_str!("../../../book/src/exact-arithmetic.md")]
mod exact_arithmetic {}
#[doc = include_str!("../../../book/src/dedekind-sums.md")]
mod dedekind_sums {}
#[doc = include_str!("../../../book/src/numeric-oracle.md")]
mod numeric_oracle {}
#[doc = include_str!("../../../book/src/period-polynomial.md")]
mod period_polynomial {}
#[doc = include_str!("../../../book/src/circulant.md")]
mod circulant {}
#[doc = include_str!("../../../book/src/wieferich.md")]
mod wieferich {}
#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}
