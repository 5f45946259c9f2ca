//! Acceptance suite for the workspace. The checks live in `tests/acceptance.rs`
//! and read the experiment configs shipped in `configs/`.
