//! Runs every code block in the guide (book/) as a doc-test, so the book
//! and the crate cannot drift apart. mdbook itself cannot link external
//! crates when testing snippets; `cargo test --doc` can.

macro_rules! chapter {
    ($name:ident, $path:literal) => {
        #[doc = include_str!($path)]
        mod $name {}
    };
}

chapter!(introduction, "../../../book/src/introduction.md");
chapter!(fields_and_matrices, "../../../book/src/fields-and-matrices.md");
chapter!(construction, "../../../book/src/construction.md");
chapter!(leakage, "../../../book/src/leakage.md");
chapter!(optimization, "../../../book/src/optimization.md");
chapter!(protocol, "../../../book/src/protocol.md");
chapter!(simulation, "../../../book/src/simulation.md");
chapter!(cli, "../../../book/src/cli.md");
chapter!(formats, "../../../book/src/formats.md");
