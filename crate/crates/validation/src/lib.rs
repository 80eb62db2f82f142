//! Holds the `acceptance` test target only. It lives in its own package so
//! that a failing criterion does not stop the other crates' tests from running.
