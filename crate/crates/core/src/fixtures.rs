//! Small hand-built markets used across tests, docs and the command line.

use crate::problem::{Problem, RawProblem};

fn build(raw: RawProblem) -> Problem {
    Problem::new(&raw).expect("fixture tables are valid")
}

/// Four students, three schools: TTC, DA and IA all disagree.
pub fn ttc_vs_da() -> Problem {
    build(RawProblem::from_tables(
        &["i1", "i2", "i3", "i4"],
        &[("s1", 2), ("s2", 1), ("s3", 1)],
        &[
            ("i1", &["s1", "s2", "s3"]),
            ("i2", &["s1", "s2", "s3"]),
            ("i3", &["s2", "s1", "s3"]),
            ("i4", &["s1", "s3", "s2"]),
        ],
        &[("s1", &["i1", "i3", "i4", "i2"]), ("s2", &["i1", "i2", "i4", "i3"]), ("s3", &["i2", "i3", "i4", "i1"])],
    ))
}

/// Three students, two schools: clinching first changes the TTC outcome.
pub fn clinch_first() -> Problem {
    build(RawProblem::from_tables(
        &["i1", "i2", "i3"],
        &[("s1", 2), ("s2", 1)],
        &[("i1", &["s2", "s1"]), ("i2", &["s1", "s2"]), ("i3", &["s2", "s1"])],
        &[("s1", &["i1", "i2", "i3"]), ("s2", &["i2", "i3", "i1"])],
    ))
}

/// Four students, three schools: iterated clinching differs from
/// clinching once. Only `i4` is ranked first at `s3`; the rest of that
/// list follows declaration order.
pub fn iterated_clinch() -> Problem {
    build(RawProblem::from_tables(
        &["i1", "i2", "i3", "i4"],
        &[("s1", 2), ("s2", 1), ("s3", 1)],
        &[("i1", &["s2", "s1"]), ("i2", &["s1", "s2"]), ("i3", &["s2", "s1"]), ("i4", &["s3"])],
        &[("s1", &["i4", "i1", "i2", "i3"]), ("s2", &["i2", "i3", "i1", "i4"]), ("s3", &["i4", "i1", "i2", "i3"])],
    ))
}

/// Four students, three schools: seat inheritance trades across several
/// pairs held by one student.
pub fn seat_inheritance() -> Problem {
    build(RawProblem::from_tables(
        &["i1", "i2", "i3", "i4"],
        &[("s1", 2), ("s2", 1), ("s3", 1)],
        &[
            ("i1", &["s1", "s2", "s3"]),
            ("i2", &["s3", "s1", "s2"]),
            ("i3", &["s2", "s1", "s3"]),
            ("i4", &["s2", "s3", "s1"]),
        ],
        &[("s1", &["i2", "i4", "i1", "i3"]), ("s2", &["i1", "i2", "i3", "i4"]), ("s3", &["i1", "i4", "i2", "i3"])],
    ))
}

/// All four markets with short names.
pub fn all() -> [(&'static str, Problem); 4] {
    [
        ("ttc_vs_da", ttc_vs_da()),
        ("clinch_first", clinch_first()),
        ("iterated_clinch", iterated_clinch()),
        ("seat_inheritance", seat_inheritance()),
    ]
}
