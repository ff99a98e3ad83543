//! Holds the `acceptance` test target, which runs the numbered end-to-end
//! criteria and prints one verdict line for each.
