//! Reference inputs with known outcomes, shared by the self-test and the
//! acceptance suite.

/// Census knots with a single alternating surgery: name, rho, N.
pub const UNIQUE_INTEGER: &[(&str, &[i64], i64)] = &[
    ("t10188", &[5, 4, 3, 2, 2], 60),
    ("t11556", &[6, 4, 3, 2], 67),
    ("t12753", &[7, 5, 3, 3], 95),
    ("o9_32132", &[7, 5, 3], 86),
    ("o9_32588", &[5, 5, 4, 3, 2, 2], 85),
    ("o9_37754", &[6, 6, 4, 3, 2], 103),
    ("o9_39451", &[7, 6, 3, 2, 2], 104),
    ("o9_40179", &[8, 7, 3, 2, 2], 132),
    ("o9_43001", &[8, 5, 4, 2, 2], 115),
    ("o9_43679", &[7, 7, 5, 3, 3], 144),
    ("o9_43953", &[9, 4, 3, 3], 118),
    ("o9_44054", &[9, 5, 3, 3], 127),
];

/// Asymmetric L-space knots with two alternating surgeries: parameters
/// `(m, b1, a1, a2, a3)`, rho, N.
pub const TWO_SLOPES: &[(&str, &[i64], i64)] = &[
    ("(1,1,1,1,0)", &[12, 9, 5, 4, 2], 272),
    ("(1,1,0,1,1)", &[16, 12, 7, 4, 2], 471),
    ("(1,1,1,2,0)", &[12, 12, 9, 5, 4, 2], 416),
    ("(1,1,2,1,0)", &[17, 14, 5, 5, 4, 2], 557),
    ("(1,2,1,1,0)", &[17, 13, 7, 6, 3], 555),
    ("(2,1,1,1,0)", &[18, 13, 7, 6, 2, 2], 588),
    ("(1,1,1,1,1)", &[26, 17, 12, 5, 4, 2], 1156),
    ("(1,1,0,2,1)", &[23, 19, 7, 7, 4, 2], 1010),
    ("(1,2,0,1,1)", &[23, 17, 10, 6, 3], 966),
    ("(1,1,2,2,0)", &[17, 17, 14, 5, 5, 4, 2], 846),
    ("(1,2,1,2,0)", &[17, 17, 13, 7, 6, 3], 844),
    ("(2,1,1,2,0)", &[18, 18, 13, 7, 6, 2, 2], 912),
    ("(1,1,0,1,2)", &[28, 12, 12, 7, 4, 2], 1143),
    ("(2,1,0,1,1)", &[24, 18, 11, 6, 2, 2], 1067),
];

/// Stable coefficients whose integer lattices at `n = m - 1 + sum rho_i^2`,
/// `m = 2, 3, 4`, admit no obtuse superbase.
pub const NO_SUPERBASE_FAMILIES: &[&[i64]] = &[&[3, 2, 2, 2], &[3, 3, 2, 2, 2], &[3, 3, 3, 2, 2, 2]];

/// Raw coefficients (highest power first) of the (-2, 3, 7) pretzel knot.
pub const PRETZEL_ALEXANDER: &[i64] = &[1, -1, 0, 1, -1, 1];

/// `(3, ..., 3, 2, 2)` with `n` threes.
pub fn threes_then_twos(n: usize) -> Vec<i64> {
    let mut v = vec![3; n];
    v.extend([2, 2]);
    v
}
