//! Published reference values for the special points of each family,
//! used by the `table` command to flag regressions.
//!
//! Three of the reference collapse brackets — (7,2), (8,3) and (9,1) —
//! are verbatim duplicates of other rows and inconsistent with the
//! monotone trend of the column; mismatches against them are expected.

pub struct ReferenceRow {
    pub n: u32,
    pub l: u32,
    pub a_hmin: f64,
    pub a_h0: f64,
    pub a_star_bracket: (f64, f64),
    pub h_min: f64,
}

pub const REFERENCE: &[ReferenceRow] = &[
    ReferenceRow {
        n: 3,
        l: 1,
        a_hmin: 0.07488,
        a_h0: 0.1876,
        a_star_bracket: (0.69893, 0.71518),
        h_min: -0.07989,
    },
    ReferenceRow {
        n: 4,
        l: 1,
        a_hmin: 0.06705,
        a_h0: 0.16853,
        a_star_bracket: (0.56352, 0.59113),
        h_min: -0.09905,
    },
    ReferenceRow {
        n: 5,
        l: 1,
        a_hmin: 0.06029,
        a_h0: 0.14971,
        a_star_bracket: (0.48862, 0.51141),
        h_min: -0.09866,
    },
    ReferenceRow {
        n: 5,
        l: 2,
        a_hmin: 0.17229,
        a_h0: 0.33098,
        a_star_bracket: (0.6973, 0.71677),
        h_min: -0.11987,
    },
    ReferenceRow {
        n: 6,
        l: 1,
        a_hmin: 0.05507,
        a_h0: 0.13538,
        a_star_bracket: (0.43752, 0.45696),
        h_min: -0.0946,
    },
    ReferenceRow {
        n: 6,
        l: 2,
        a_hmin: 0.15519,
        a_h0: 0.29683,
        a_star_bracket: (0.62353, 0.64131),
        h_min: -0.12072,
    },
    ReferenceRow {
        n: 7,
        l: 1,
        a_hmin: 0.05095,
        a_h0: 0.12431,
        a_star_bracket: (0.3999, 0.41665),
        h_min: -0.09,
    },
    ReferenceRow {
        n: 7,
        l: 2,
        a_hmin: 0.14246,
        a_h0: 0.2708,
        a_star_bracket: (0.76683, 0.78221),
        h_min: -0.11714,
    },
    ReferenceRow {
        n: 7,
        l: 3,
        a_hmin: 0.23697,
        a_h0: 0.39953,
        a_star_bracket: (0.69991, 0.71422),
        h_min: -0.12333,
    },
    ReferenceRow {
        n: 8,
        l: 1,
        a_hmin: 0.04765,
        a_h0: 0.1155,
        a_star_bracket: (0.37071, 0.38527),
        h_min: -0.08561,
    },
    ReferenceRow {
        n: 8,
        l: 2,
        a_hmin: 0.13228,
        a_h0: 0.2504,
        a_star_bracket: (0.52737, 0.54167),
        h_min: -0.11253,
    },
    ReferenceRow {
        n: 8,
        l: 3,
        a_hmin: 0.21876,
        a_h0: 0.36791,
        a_star_bracket: (0.42153, 0.43128),
        h_min: -0.12103,
    },
    ReferenceRow {
        n: 9,
        l: 1,
        a_hmin: 0.04489,
        a_h0: 0.10829,
        a_star_bracket: (0.6973, 0.71677),
        h_min: -0.08162,
    },
    ReferenceRow {
        n: 9,
        l: 2,
        a_hmin: 0.12417,
        a_h0: 0.23392,
        a_star_bracket: (0.49359, 0.50642),
        h_min: -0.1079,
    },
    ReferenceRow {
        n: 9,
        l: 3,
        a_hmin: 0.20423,
        a_h0: 0.34261,
        a_star_bracket: (0.60624, 0.61847),
        h_min: -0.11732,
    },
    ReferenceRow {
        n: 9,
        l: 4,
        a_hmin: 0.28359,
        a_h0: 0.44143,
        a_star_bracket: (0.70134, 0.71282),
        h_min: -0.11986,
    },
    ReferenceRow {
        n: 10,
        l: 1,
        a_hmin: 0.04255,
        a_h0: 0.10226,
        a_star_bracket: (0.32756, 0.33914),
        h_min: -0.07804,
    },
    ReferenceRow {
        n: 10,
        l: 2,
        a_hmin: 0.1173,
        a_h0: 0.22029,
        a_star_bracket: (0.46564, 0.47718),
        h_min: -0.10353,
    },
    ReferenceRow {
        n: 10,
        l: 3,
        a_hmin: 0.19238,
        a_h0: 0.32184,
        a_star_bracket: (0.57166, 0.58302),
        h_min: -0.11329,
    },
    ReferenceRow {
        n: 10,
        l: 4,
        a_hmin: 0.26605,
        a_h0: 0.41362,
        a_star_bracket: (0.6614, 0.67189),
        h_min: -0.11703,
    },
    ReferenceRow {
        n: 11,
        l: 1,
        a_hmin: 0.04049,
        a_h0: 0.09713,
        a_star_bracket: (0.31105, 0.32143),
        h_min: -0.07484,
    },
    ReferenceRow {
        n: 11,
        l: 2,
        a_hmin: 0.1116,
        a_h0: 0.20877,
        a_star_bracket: (0.44193, 0.45251),
        h_min: -0.09952,
    },
    ReferenceRow {
        n: 11,
        l: 3,
        a_hmin: 0.18225,
        a_h0: 0.30441,
        a_star_bracket: (0.54243, 0.55301),
        h_min: -0.10933,
    },
    ReferenceRow {
        n: 11,
        l: 4,
        a_hmin: 0.25137,
        a_h0: 0.39044,
        a_star_bracket: (0.6275, 0.63738),
        h_min: -0.11367,
    },
    ReferenceRow {
        n: 11,
        l: 5,
        a_hmin: 0.31936,
        a_h0: 0.47029,
        a_star_bracket: (0.70237, 0.7118),
        h_min: -0.11494,
    },
    ReferenceRow {
        n: 12,
        l: 1,
        a_hmin: 0.03879,
        a_h0: 0.09269,
        a_star_bracket: (0.29583, 0.30724),
        h_min: -0.07197,
    },
    ReferenceRow {
        n: 12,
        l: 2,
        a_hmin: 0.10659,
        a_h0: 0.19888,
        a_star_bracket: (0.42153, 0.43128),
        h_min: -0.09586,
    },
    ReferenceRow {
        n: 12,
        l: 3,
        a_hmin: 0.17372,
        a_h0: 0.28953,
        a_star_bracket: (0.51736, 0.5271),
        h_min: -0.10559,
    },
    ReferenceRow {
        n: 12,
        l: 4,
        a_hmin: 0.23893,
        a_h0: 0.37077,
        a_star_bracket: (0.59835, 0.60767),
        h_min: -0.11023,
    },
    ReferenceRow {
        n: 12,
        l: 5,
        a_hmin: 0.30276,
        a_h0: 0.44584,
        a_star_bracket: (0.66868, 0.67968),
        h_min: -0.11218,
    },
];

pub fn lookup(n: u32, l: u32) -> Option<&'static ReferenceRow> {
    REFERENCE.iter().find(|r| r.n == n && r.l == l)
}
