//! Holds the `acceptance` test target; run it with `cargo test -p lrhsr-validation --test acceptance`.
