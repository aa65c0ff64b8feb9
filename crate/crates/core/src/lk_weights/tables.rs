//! Exact coefficient tables, stored as `(numerator, denominator)` pairs.

use num_rational::Ratio;

pub type Rational = Ratio<i128>;

type Row = &'static [(i128, i128)];

pub(crate) fn to_rationals(row: Row) -> Vec<Rational> {
    row.iter().map(|&(n, d)| Rational::new(n, d)).collect()
}

/// Classical BDF_k coefficients, index `j = 0..k`.
pub(crate) const BDF: [Row; 6] = [
    &[(1, 1), (-1, 1)],
    &[(3, 2), (-2, 1), (1, 2)],
    &[(11, 6), (-3, 1), (3, 2), (-1, 3)],
    &[(25, 12), (-4, 1), (3, 1), (-4, 3), (1, 4)],
    &[(137, 60), (-5, 1), (5, 1), (-10, 3), (5, 4), (-1, 5)],
    &[
        (49, 20),
        (-6, 1),
        (15, 2),
        (-20, 3),
        (15, 4),
        (-6, 5),
        (1, 6),
    ],
];

/// Starting-step coefficients `a^(k)_n`, `n = 1..k`.
pub(crate) const CORRECTION_A: [Row; 6] = [
    &[(1, 2)],
    &[(11, 12), (-5, 12)],
    &[(31, 24), (-7, 6), (3, 8)],
    &[(1181, 720), (-177, 80), (341, 240), (-251, 720)],
    &[(2837, 1440), (-2543, 720), (17, 5), (-1201, 720), (95, 288)],
    &[
        (138241, 60480),
        (-309047, 60480),
        (198251, 30240),
        (-145877, 30240),
        (23077, 12096),
        (-19087, 60480),
    ],
];

const Z: (i128, i128) = (0, 1);

/// Starting-step coefficients `d^(k)_{l,n}`; `CORRECTION_D[k-1][l-1][n-1]`.
pub(crate) const CORRECTION_D: [&[Row]; 6] = [
    &[],
    &[&[(1, 12), Z]],
    &[&[(1, 6), (-1, 12), Z], &[Z, Z, Z]],
    &[
        &[(59, 240), (-29, 120), (19, 240), Z],
        &[(1, 240), (-1, 240), Z, Z],
        &[(-1, 720), Z, Z, Z],
    ],
    &[
        &[(77, 240), (-7, 15), (73, 240), (-3, 40), Z],
        &[(1, 96), (-1, 60), (1, 160), Z, Z],
        &[(-1, 360), (1, 720), Z, Z, Z],
        &[Z, Z, Z, Z, Z],
    ],
    &[
        &[
            (23719, 60480),
            (-11371, 15120),
            (7381, 10080),
            (-5449, 15120),
            (863, 12096),
            Z,
        ],
        &[(1, 60), (-17, 480), (1, 40), (-1, 160), Z, Z],
        &[(-58, 15120), (53, 15120), (-1, 945), Z, Z, Z],
        &[(-1, 6048), (1, 6048), Z, Z, Z, Z],
        &[(1, 30240), Z, Z, Z, Z, Z],
    ],
];

/// Multipliers `b^(k)_j`, `j = 1..k`.
pub(crate) const GENERATING_B: [Row; 6] = [
    &[(1, 1)],
    &[(1, 1), (1, 2)],
    &[(1, 1), (1, 1), (1, 3)],
    &[(1, 1), (3, 2), (11, 12), (1, 4)],
    &[(1, 1), (2, 1), (7, 4), (5, 6), (1, 5)],
    &[(1, 1), (5, 2), (17, 6), (15, 8), (137, 180), (1, 6)],
];

/// Explicit-form data: the signed `(k+1)`-point difference stencil and the
/// per-power multipliers, highest power `k−α` first.
pub(crate) struct ExplicitRow {
    pub stencil: &'static [i64],
    pub multipliers: &'static [f64],
}

pub(crate) const EXPLICIT: [ExplicitRow; 6] = [
    ExplicitRow {
        stencil: &[1, -2, 1],
        multipliers: &[1.0],
    },
    ExplicitRow {
        stencil: &[1, -3, 3, -1],
        multipliers: &[1.0, 1.0 / 2.0],
    },
    ExplicitRow {
        stencil: &[1, -4, 6, -4, 1],
        multipliers: &[1.0, 1.0, 1.0 / 3.0],
    },
    ExplicitRow {
        stencil: &[1, -5, 10, -10, 5, -1],
        multipliers: &[1.0, 3.0 / 2.0, 11.0 / 12.0, 1.0 / 4.0],
    },
    ExplicitRow {
        stencil: &[1, -6, 15, -20, 15, -6, 1],
        multipliers: &[1.0, 2.0, 7.0 / 4.0, 5.0 / 6.0, 1.0 / 5.0],
    },
    ExplicitRow {
        stencil: &[1, -7, 21, -35, 35, -21, 7, -1],
        multipliers: &[
            1.0,
            5.0 / 2.0,
            17.0 / 6.0,
            15.0 / 8.0,
            137.0 / 180.0,
            1.0 / 6.0,
        ],
    },
];
