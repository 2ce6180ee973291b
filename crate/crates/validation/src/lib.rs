//! Home of the `acceptance` test target: `cargo test -p ceos-validation`.
//! Each check prints one PASS/FAIL line and the target fails if any check
//! does.
