//! The guide in `book/` and the README compiled as doctests, one module per
//! chapter.

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/noise.md")]
    mod noise {}
    #[doc = include_str!("../../../book/src/entanglement.md")]
    mod entanglement {}
    #[doc = include_str!("../../../book/src/protocols.md")]
    mod protocols {}
    #[doc = include_str!("../../../book/src/design-space.md")]
    mod design_space {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
