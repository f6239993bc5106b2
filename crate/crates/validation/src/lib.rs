//! Holds no code. The acceptance criteria live in `tests/acceptance.rs`, in
//! their own package so that `cargo test --workspace` runs them after every
//! other suite.
