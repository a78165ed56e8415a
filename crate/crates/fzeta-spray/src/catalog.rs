//! Sets whose fractal zeta functions, or at least whose pole sets, are
//! known exactly.
//!
//! Every entry records the ambient dimension, which normalization its zeta
//! uses, a closed form when one exists, the pole divisor (flagged when it
//! is only an upper bound), and a table of residues computed from separate
//! analytic formulas, never read back from the expression tree, so the two
//! can be cross-checked.

use fzeta_expr::{Base, Expr};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::{Divisor, PeriodicPoles, SprayError};

/// How an entry's zeta function is normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EntryKind {
    /// Relative zeta of a pair `(A, Omega)`: the integral of
    /// `d(x, A)^(s-N)` over `Omega`.
    Relative,
    /// Distance zeta of a bounded set, integrated over its
    /// delta-neighborhood.
    Bounded { delta: f64 },
    /// Tube zeta: the Mellin-type integral of the tube volume,
    /// `integral of t^(s-N-1) V(t) dt` from `0` to `delta`.
    Tube { delta: f64 },
}

/// Optional parameters accepted by some entries.
#[derive(Clone, Copy, Debug, Default)]
pub struct CatalogParams {
    /// Ambient dimension for the parametric families; defaults to 2.
    pub n: Option<u32>,
    /// Neighborhood depth where the entry admits one; defaults to 1.
    pub delta: Option<f64>,
}

/// One catalog record.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub ambient: u32,
    pub kind: EntryKind,
    /// Closed form of the zeta, absent when only the pole set is known.
    pub zeta: Option<Expr>,
    /// For bounded entries whose zeta adds neighborhood terms to a
    /// self-similar core, the core alone; a spray reconstruction from the
    /// generator must reproduce exactly this factor.
    pub relative_part: Option<Expr>,
    pub divisor: Divisor,
    /// False when the divisor is only known to contain the poles.
    pub divisor_exact: bool,
    /// Upper Minkowski dimension: the largest real part in the divisor.
    pub dimension: f64,
    /// Simple poles with their residues, from analytic formulas
    /// independent of `zeta`. For entries without a closed form these are
    /// known values that cannot be re-derived here.
    pub residues: Vec<(Complex64, Complex64)>,
    pub notes: &'static str,
}

/// Volume of the unit ball in the given dimension.
pub fn ball_volume(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => {
            let mut prev = 1.0;
            let mut cur = 2.0;
            for k in 2..=n {
                let next = prev * 2.0 * PI / k as f64;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ln3() -> f64 {
    3.0f64.ln()
}

/// Oscillation period of base-2 lattice systems.
fn period2() -> f64 {
    2.0 * PI / std::f64::consts::LN_2
}

/// Oscillation period of base-3 lattice systems.
fn period3() -> f64 {
    2.0 * PI / ln3()
}

/// `coeff * delta^(s - a) / (s - a)`.
fn neighborhood_term(coeff: f64, delta: f64, a: f64) -> Expr {
    Expr::div(
        Expr::mul(vec![
            Expr::real(coeff * delta.powf(-a)),
            Expr::exp_base(Base::real(delta)),
        ]),
        Expr::s_minus(a),
    )
}

/// `1 - count * base^s` as an expression.
fn lattice_denominator(count: f64, base: Base) -> Expr {
    Expr::add(vec![Expr::real(1.0), Expr::mul(vec![Expr::real(-count), Expr::exp_base(base)])])
}

fn family_residues(
    base_re: f64,
    period: f64,
    ks: &[i32],
    value: impl Fn(Complex64) -> Complex64,
) -> Vec<(Complex64, Complex64)> {
    ks.iter()
        .map(|&k| {
            let s = cx(base_re, k as f64 * period);
            (s, value(s))
        })
        .collect()
}

const FAMILY_KS: [i32; 5] = [-2, -1, 0, 1, 2];
const FAMILY_KS_NONZERO: [i32; 4] = [-2, -1, 1, 2];

fn cantor_string() -> CatalogEntry {
    let d = std::f64::consts::LN_2 / ln3();
    let zeta = Expr::div(
        Expr::mul(vec![Expr::real(2.0), Expr::exp_base(Base::rational(1, 2))]),
        Expr::mul(vec![
            Expr::var(),
            Expr::add(vec![Expr::exp_base(Base::rational(3, 1)), Expr::real(-2.0)]),
        ]),
    );
    let mut residues = vec![(cx(0.0, 0.0), cx(-2.0, 0.0))];
    residues.extend(family_residues(d, period3(), &FAMILY_KS, |s| {
        (-s * std::f64::consts::LN_2).exp() / (s * ln3())
    }));
    CatalogEntry {
        name: "cantor-string",
        ambient: 1,
        kind: EntryKind::Relative,
        zeta: Some(zeta),
        relative_part: None,
        divisor: Divisor::from_parts(
            vec![(cx(0.0, 0.0), 1)],
            vec![PeriodicPoles { base: cx(d, 0.0), period: period3(), order: 1 }],
        ),
        divisor_exact: true,
        dimension: d,
        residues,
        notes: "Middle-third Cantor set relative to (0, 1). The same function is \
                2^(1-s)/s times the length zeta 1/(3^s - 2) of the complementary \
                intervals, so string and set pictures share one pole set: log_3 2 \
                with one vertical progression, plus a simple pole at 0.",
    }
}

fn cantor_graph() -> CatalogEntry {
    let d = std::f64::consts::LN_2 / ln3();
    let zeta = Expr::div(
        Expr::real(2.0),
        Expr::mul(vec![
            Expr::var(),
            Expr::s_minus(1.0),
            Expr::add(vec![Expr::exp_base(Base::rational(3, 1)), Expr::real(-2.0)]),
        ]),
    );
    let mut residues = vec![(cx(0.0, 0.0), cx(2.0, 0.0)), (cx(1.0, 0.0), cx(2.0, 0.0))];
    residues.extend(family_residues(d, period3(), &FAMILY_KS, |s| {
        1.0 / (ln3() * s * (s - 1.0))
    }));
    CatalogEntry {
        name: "cantor-graph",
        ambient: 2,
        kind: EntryKind::Relative,
        zeta: Some(zeta),
        relative_part: None,
        divisor: Divisor::from_parts(
            vec![(cx(0.0, 0.0), 1), (cx(1.0, 0.0), 1)],
            vec![PeriodicPoles { base: cx(d, 0.0), period: period3(), order: 1 }],
        ),
        divisor_exact: true,
        dimension: 1.0,
        residues,
        notes: "Graph of the Cantor function relative to a natural region of area \
                1/7 (the zeta's value at s = 2). The dominant pole at 1 is real \
                and simple with residue 2, so the graph has Minkowski content 2; \
                the progression over log_3 2 makes it fractal strictly below its \
                dimension.",
    }
}

fn cantor_grill() -> CatalogEntry {
    let d = std::f64::consts::LN_2 / ln3();
    CatalogEntry {
        name: "cantor-grill",
        ambient: 2,
        kind: EntryKind::Bounded { delta: 1.0 },
        zeta: None,
        relative_part: None,
        divisor: Divisor::from_parts(
            vec![(cx(0.0, 0.0), 1), (cx(1.0, 0.0), 1)],
            vec![
                PeriodicPoles { base: cx(d, 0.0), period: period3(), order: 1 },
                PeriodicPoles { base: cx(1.0 + d, 0.0), period: period3(), order: 1 },
            ],
        ),
        divisor_exact: true,
        dimension: 1.0 + d,
        residues: Vec::new(),
        notes: "Cantor set times [0, 1]. The pole set is the Minkowski sum of the \
                factors' pole sets: both Cantor progressions return shifted by the \
                interval's poles at 0 and 1, with dimension 1 + log_3 2.",
    }
}

fn cantor_dust() -> CatalogEntry {
    let d = std::f64::consts::LN_2 / ln3();
    CatalogEntry {
        name: "cantor-dust",
        ambient: 2,
        kind: EntryKind::Bounded { delta: 1.0 },
        zeta: None,
        relative_part: None,
        divisor: Divisor::from_parts(
            vec![(cx(0.0, 0.0), 1)],
            vec![
                PeriodicPoles { base: cx(d, 0.0), period: period3(), order: 1 },
                PeriodicPoles { base: cx(2.0 * d, 0.0), period: period3(), order: 1 },
            ],
        ),
        divisor_exact: false,
        dimension: 2.0 * d,
        residues: Vec::new(),
        notes: "Planar Cantor dust, the product of two Cantor sets. The listed set \
                (0, the log_3 2 progression, and its double at log_3 4) contains \
                every pole; whether each point is attained, and with what order, \
                is open, so the divisor is an upper bound and orders are nominal.",
    }
}

fn unit_interval(delta: f64) -> CatalogEntry {
    let zeta = Expr::add(vec![
        neighborhood_term(1.0, delta, 1.0),
        neighborhood_term(2.0, delta, 0.0),
    ]);
    CatalogEntry {
        name: "unit-interval",
        ambient: 1,
        kind: EntryKind::Tube { delta },
        zeta: Some(zeta),
        relative_part: None,
        divisor: Divisor::from_parts(vec![(cx(0.0, 0.0), 1), (cx(1.0, 0.0), 1)], vec![]),
        divisor_exact: true,
        dimension: 1.0,
        residues: vec![(cx(1.0, 0.0), cx(1.0, 0.0)), (cx(0.0, 0.0), cx(2.0, 0.0))],
        notes: "The unit interval in the line, via its tube volume 1 + 2t. Full \
                dimension with content 1 at the pole s = 1; the endpoint pair \
                contributes the pole at 0. Residues do not depend on delta.",
    }
}

fn sierpinski_gasket() -> CatalogEntry {
    let delta = 1.0 / (2.0 * 3.0f64.sqrt());
    let d = ln3() / std::f64::consts::LN_2;
    let core = Expr::div(
        Expr::mul(vec![
            Expr::real(6.0 * 3.0f64.sqrt()),
            Expr::exp_base(Base::real(delta)),
        ]),
        Expr::mul(vec![
            Expr::var(),
            Expr::s_minus(1.0),
            Expr::add(vec![Expr::exp_base(Base::rational(2, 1)), Expr::real(-3.0)]),
        ]),
    );
    let zeta = Expr::add(vec![
        core.clone(),
        neighborhood_term(2.0 * PI, delta, 0.0),
        neighborhood_term(3.0, delta, 1.0),
    ]);
    let mut residues = vec![
        (cx(0.0, 0.0), cx(3.0 * 3.0f64.sqrt() + 2.0 * PI, 0.0)),
        (cx(1.0, 0.0), cx(0.0, 0.0)),
    ];
    residues.extend(family_residues(d, period2(), &FAMILY_KS, |s| {
        let num = 6.0 * ((cx(1.0, 0.0) - s) * 0.5 * ln3()).exp() * (-s * 4.0f64.ln()).exp();
        num / (std::f64::consts::LN_2 * s * (s - 1.0))
    }));
    CatalogEntry {
        name: "sierpinski-gasket",
        ambient: 2,
        kind: EntryKind::Bounded { delta },
        zeta: Some(zeta),
        relative_part: Some(core),
        divisor: Divisor::from_parts(
            vec![(cx(0.0, 0.0), 1)],
            vec![PeriodicPoles { base: cx(d, 0.0), period: period2(), order: 1 }],
        ),
        divisor_exact: true,
        dimension: d,
        residues,
        notes: "Sierpinski gasket with neighborhood depth delta = 1/(2 sqrt 3), \
                the inradius of the unit triangle. At s = 1 the spray core and \
                the outer boundary term have opposite residues -3 and 3, so 1 is \
                a removable point and the divisor keeps only 0 and the \
                progression over log_2 3.",
    }
}

fn sierpinski_carpet() -> CatalogEntry {
    let delta = 1.0 / 3.0;
    let d = 8.0f64.ln() / ln3();
    let core = Expr::div(
        Expr::mul(vec![Expr::real(8.0), Expr::exp_base(Base::rational(1, 2))]),
        Expr::mul(vec![
            Expr::var(),
            Expr::s_minus(1.0),
            Expr::add(vec![Expr::exp_base(Base::rational(3, 1)), Expr::real(-8.0)]),
        ]),
    );
    let zeta = Expr::add(vec![
        core.clone(),
        neighborhood_term(2.0 * PI, delta, 0.0),
        neighborhood_term(4.0, delta, 1.0),
    ]);
    let mut residues = vec![
        (cx(0.0, 0.0), cx(2.0 * PI + 8.0 / 7.0, 0.0)),
        (cx(1.0, 0.0), cx(16.0 / 5.0, 0.0)),
    ];
    residues.extend(family_residues(d, period3(), &FAMILY_KS, |s| {
        (-s * std::f64::consts::LN_2).exp() / (ln3() * s * (s - 1.0))
    }));
    CatalogEntry {
        name: "sierpinski-carpet",
        ambient: 2,
        kind: EntryKind::Bounded { delta },
        zeta: Some(zeta),
        relative_part: Some(core),
        divisor: Divisor::from_parts(
            vec![(cx(0.0, 0.0), 1), (cx(1.0, 0.0), 1)],
            vec![PeriodicPoles { base: cx(d, 0.0), period: period3(), order: 1 }],
        ),
        divisor_exact: true,
        dimension: d,
        residues,
        notes: "Sierpinski carpet with neighborhood depth delta = 1/3. Unlike the \
                gasket, the pole at 1 survives with residue 16/5; the dimension \
                log_3 8 carries one vertical progression.",
    }
}

fn sierpinski_3d_carpet() -> CatalogEntry {
    let delta = 1.0 / 3.0;
    let d = 26.0f64.ln() / ln3();
    let core = Expr::div(
        Expr::mul(vec![Expr::real(48.0), Expr::exp_base(Base::rational(1, 2))]),
        Expr::mul(vec![
            Expr::var(),
            Expr::s_minus(1.0),
            Expr::s_minus(2.0),
            Expr::add(vec![Expr::exp_base(Base::rational(3, 1)), Expr::real(-26.0)]),
        ]),
    );
    let zeta = Expr::add(vec![
        core.clone(),
        neighborhood_term(4.0 * PI, delta, 0.0),
        neighborhood_term(6.0 * PI, delta, 1.0),
        neighborhood_term(6.0, delta, 2.0),
    ]);
    let mut residues = vec![
        (cx(0.0, 0.0), cx(4.0 * PI - 24.0 / 25.0, 0.0)),
        (cx(1.0, 0.0), cx(6.0 * PI + 24.0 / 23.0, 0.0)),
        (cx(2.0, 0.0), cx(96.0 / 17.0, 0.0)),
    ];
    residues.extend(family_residues(d, period3(), &FAMILY_KS, |s| {
        24.0 * (-s * std::f64::consts::LN_2).exp()
            / (13.0 * ln3() * s * (s - 1.0) * (s - 2.0))
    }));
    CatalogEntry {
        name: "sierpinski-3d-carpet",
        ambient: 3,
        kind: EntryKind::Bounded { delta },
        zeta: Some(zeta),
        relative_part: Some(core),
        divisor: Divisor::from_parts(
            vec![(cx(0.0, 0.0), 1), (cx(1.0, 0.0), 1), (cx(2.0, 0.0), 1)],
            vec![PeriodicPoles { base: cx(d, 0.0), period: period3(), order: 1 }],
        ),
        divisor_exact: true,
        dimension: d,
        residues,
        notes: "Three-dimensional carpet: the unit cube with the open middle-third \
                cube removed at every scale (26 of 27 subcubes kept), delta = 1/3. \
                Dimension log_3 26 with one progression; integer poles at 0, 1, 2.",
    }
}

fn half_square() -> CatalogEntry {
    let delta = 0.5;
    let core = Expr::div(
        Expr::exp_base(Base::rational(1, 2)),
        Expr::mul(vec![
            Expr::var(),
            Expr::s_minus(1.0),
            Expr::add(vec![Expr::exp_base(Base::rational(2, 1)), Expr::real(-2.0)]),
        ]),
    );
    let zeta = Expr::add(vec![
        core.clone(),
        neighborhood_term(2.0 * PI, delta, 0.0),
        neighborhood_term(4.0, delta, 1.0),
    ]);
    let mut residues = vec![(cx(0.0, 0.0), cx(1.0 + 2.0 * PI, 0.0))];
    residues.extend(family_residues(1.0, period2(), &FAMILY_KS_NONZERO, |s| {
        1.0 / (4.0 * std::f64::consts::LN_2 * s * (s - 1.0))
    }));
    CatalogEntry {
        name: "half-square",
        ambient: 2,
        kind: EntryKind::Bounded { delta },
        zeta: Some(zeta),
        relative_part: Some(core),
        divisor: Divisor::from_parts(
            vec![(cx(0.0, 0.0), 1), (cx(1.0, 0.0), 1)],
            vec![PeriodicPoles { base: cx(1.0, 0.0), period: period2(), order: 1 }],
        ),
        divisor_exact: true,
        dimension: 1.0,
        residues,
        notes: "Half-square nest: squares of side 2^-k, one per scale, glued along \
                an axis, with delta = 1/2. The similarity dimension hits the \
                generator pole, so s = 1 is a double pole: the Laurent \
                coefficients there are c(-2) = 1/(4 log 2) and c(-1) = 29/8 - \
                1/(4 log 2), the tube volume grows like eps log(1/eps), and plain \
                Minkowski content degenerates; the gauge log(1/t) restores the \
                finite content c(-2). The bare core without neighborhood terms \
                has c(-1) = -3/8 - 1/(4 log 2) instead.",
    }
}

fn third_square() -> CatalogEntry {
    let d2 = std::f64::consts::LN_2 / ln3();
    CatalogEntry {
        name: "third-square",
        ambient: 2,
        kind: EntryKind::Bounded { delta: 1.0 },
        zeta: None,
        relative_part: None,
        divisor: Divisor::from_parts(
            vec![(cx(0.0, 0.0), 1), (cx(1.0, 0.0), 1)],
            vec![PeriodicPoles { base: cx(d2, 0.0), period: period3(), order: 1 }],
        ),
        divisor_exact: false,
        dimension: 1.0,
        residues: vec![
            (cx(0.0, 0.0), cx(12.0 + PI, 0.0)),
            (cx(1.0, 0.0), cx(16.0, 0.0)),
        ],
        notes: "Third-square nest: squares of side 3^-k with two copies per scale. \
                The zeta is 2/(s (3^s - 2)) times (6/(s-1) + an entire function \
                known only through its special values), so only the pole set and \
                the residues at 1 (Minkowski content 16) and 0 are recorded; the \
                tube volume is 16 eps + oscillations of order eps^(2 - log_3 2).",
    }
}

fn n_gasket(n: u32) -> Result<CatalogEntry, SprayError> {
    if n < 2 {
        return Err(SprayError::UnsupportedParams {
            entry: "n-gasket",
            reason: format!("ambient dimension must be at least 2, got {n}"),
        });
    }
    if n > 64 {
        return Err(SprayError::UnsupportedParams {
            entry: "n-gasket",
            reason: format!("ambient dimension {n} is unreasonably large"),
        });
    }
    let sim = ((n + 1) as f64).ln() / std::f64::consts::LN_2;
    let zeta = match n {
        2 => {
            let g = 1.0 / (4.0 * 3.0f64.sqrt());
            Some(Expr::div(
                Expr::mul(vec![
                    Expr::real(6.0 * 3.0f64.sqrt()),
                    Expr::exp_base(Base::real(g)),
                ]),
                Expr::mul(vec![
                    Expr::var(),
                    Expr::s_minus(1.0),
                    lattice_denominator(3.0, Base::rational(1, 2)),
                ]),
            ))
        }
        3 => {
            let g = 1.0 / (2.0 * 6.0f64.sqrt());
            Some(Expr::div(
                Expr::mul(vec![
                    Expr::real(24.0 * 3.0f64.sqrt()),
                    Expr::exp_base(Base::real(g)),
                ]),
                Expr::mul(vec![
                    Expr::var(),
                    Expr::s_minus(1.0),
                    Expr::s_minus(2.0),
                    lattice_denominator(4.0, Base::rational(1, 2)),
                ]),
            ))
        }
        _ => None,
    };
    let fixed = (0..n).map(|a| (cx(a as f64, 0.0), 1)).collect();
    let divisor = Divisor::from_parts(
        fixed,
        vec![PeriodicPoles { base: cx(sim, 0.0), period: period2(), order: 1 }],
    );
    let residues = match n {
        2 => {
            let g = 1.0 / (4.0 * 3.0f64.sqrt());
            let mut r = vec![
                (cx(0.0, 0.0), cx(3.0 * 3.0f64.sqrt(), 0.0)),
                (cx(1.0, 0.0), cx(-3.0, 0.0)),
            ];
            r.extend(family_residues(sim, period2(), &FAMILY_KS, move |s| {
                6.0 * 3.0f64.sqrt() * (s * g.ln()).exp()
                    / (std::f64::consts::LN_2 * s * (s - 1.0))
            }));
            r
        }
        3 => {
            let g = 1.0 / (2.0 * 6.0f64.sqrt());
            let mut r = vec![
                (cx(0.0, 0.0), cx(-4.0 * 3.0f64.sqrt(), 0.0)),
                (cx(1.0, 0.0), cx(6.0 * 2.0f64.sqrt(), 0.0)),
            ];
            r.extend(family_residues(sim, period2(), &FAMILY_KS_NONZERO, move |s| {
                24.0 * 3.0f64.sqrt() * (s * g.ln()).exp()
                    / (std::f64::consts::LN_2 * s * (s - 1.0) * (s - 2.0))
            }));
            r
        }
        _ => Vec::new(),
    };
    Ok(CatalogEntry {
        name: "n-gasket",
        ambient: n,
        kind: EntryKind::Relative,
        zeta,
        relative_part: None,
        divisor,
        divisor_exact: n <= 3,
        dimension: ((n - 1) as f64).max(sim),
        residues,
        notes: "Simplex gasket in dimension n: n+1 half-scale copies of the \
                n-simplex around a central generator (a triangle's middle \
                triangle for n = 2, an octahedron for n = 3). Closed forms are \
                stored for n = 2 and 3; beyond that the generator's tube volume \
                is no longer a single polynomial and only the candidate pole set \
                {0..n-1} plus the log_2(n+1) progression is listed. Whenever \
                n + 1 is a power of two the similarity dimension collides with \
                an integer pole and doubles it, first at n = 3.",
    })
}

fn n_carpet(n: u32) -> Result<CatalogEntry, SprayError> {
    if n < 2 {
        return Err(SprayError::UnsupportedParams {
            entry: "n-carpet",
            reason: format!("ambient dimension must be at least 2, got {n}"),
        });
    }
    if n > 512 {
        return Err(SprayError::UnsupportedParams {
            entry: "n-carpet",
            reason: format!("ambient dimension {n} is unreasonably large"),
        });
    }
    // log_3 (3^n - 1), written to stay finite for large n.
    let d = (n as f64 * ln3() + (-(3.0f64).powi(-(n as i32))).ln_1p()) / ln3();
    let fixed = (0..n).map(|a| (cx(a as f64, 0.0), 1)).collect();
    Ok(CatalogEntry {
        name: "n-carpet",
        ambient: n,
        kind: EntryKind::Relative,
        zeta: None,
        relative_part: None,
        divisor: Divisor::from_parts(
            fixed,
            vec![PeriodicPoles { base: cx(d, 0.0), period: period3(), order: 1 }],
        ),
        divisor_exact: true,
        dimension: d,
        residues: Vec::new(),
        notes: "Carpet in dimension n: the unit cube keeps all but the middle of \
                its 3^n third-scale subcubes. Dimension log_3(3^n - 1) with one \
                progression, plus simple integer poles 0..n-1; log_3(3^n - 1) is \
                never an integer, so no collision occurs. For n = 2 the \
                sierpinski-carpet entry has the closed form.",
    })
}

fn sphere(n: u32, delta: f64) -> Result<CatalogEntry, SprayError> {
    if n < 1 || n > 40 {
        return Err(SprayError::UnsupportedParams {
            entry: "sphere",
            reason: format!("ambient dimension must be between 1 and 40, got {n}"),
        });
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(SprayError::UnsupportedParams {
            entry: "sphere",
            reason: format!("delta must lie in (0, 1], got {delta}"),
        });
    }
    let theta = ball_volume(n);
    let mut terms = Vec::new();
    let mut fixed = Vec::new();
    let mut residues = Vec::new();
    for k in (1..=n).step_by(2) {
        let coeff = 2.0 * theta * binomial(n, k);
        let a = (n - k) as f64;
        terms.push(neighborhood_term(coeff, delta, a));
        fixed.push((cx(a, 0.0), 1));
        residues.push((cx(a, 0.0), cx(coeff, 0.0)));
    }
    Ok(CatalogEntry {
        name: "sphere",
        ambient: n,
        kind: EntryKind::Tube { delta },
        zeta: Some(Expr::add(terms)),
        relative_part: None,
        divisor: Divisor::from_parts(fixed, vec![]),
        divisor_exact: true,
        dimension: (n - 1) as f64,
        residues,
        notes: "Unit sphere in n-space via its two-sided tube volume \
                Theta_n ((1+t)^n - (1-t)^n). All poles are real and descend from \
                n-1 in steps of two; the residue at the dimension is the \
                Minkowski content 2 n Theta_n, twice the surface area. Residues \
                do not depend on delta.",
    })
}

fn sphere_in_ball(n: u32) -> Result<CatalogEntry, SprayError> {
    if n < 1 || n > 40 {
        return Err(SprayError::UnsupportedParams {
            entry: "sphere-in-ball",
            reason: format!("ambient dimension must be between 1 and 40, got {n}"),
        });
    }
    let theta = ball_volume(n);
    let mut terms = Vec::new();
    let mut fixed = Vec::new();
    let mut residues = Vec::new();
    for j in 0..n {
        let sign = if (n - 1 - j) % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = n as f64 * theta * binomial(n - 1, j) * sign;
        terms.push(Expr::div(Expr::real(coeff), Expr::s_minus(j as f64)));
        fixed.push((cx(j as f64, 0.0), 1));
        residues.push((cx(j as f64, 0.0), cx(coeff, 0.0)));
    }
    Ok(CatalogEntry {
        name: "sphere-in-ball",
        ambient: n,
        kind: EntryKind::Relative,
        zeta: Some(Expr::add(terms)),
        relative_part: None,
        divisor: Divisor::from_parts(fixed, vec![]),
        divisor_exact: true,
        dimension: (n - 1) as f64,
        residues,
        notes: "Unit sphere relative to its open ball: the layer-cake integral of \
                n Theta_n (1-t)^(n-1) expands into simple poles at 0..n-1 only. \
                Every pole is real, so the drum is not fractal; the residue at \
                the dimension is the enclosed surface content n Theta_n.",
    })
}

/// Names served by [`catalog_get`], in display order.
pub fn catalog_entries() -> Vec<&'static str> {
    vec![
        "cantor-string",
        "cantor-graph",
        "cantor-grill",
        "cantor-dust",
        "unit-interval",
        "sierpinski-gasket",
        "sierpinski-carpet",
        "sierpinski-3d-carpet",
        "half-square",
        "third-square",
        "n-gasket",
        "n-carpet",
        "sphere",
        "sphere-in-ball",
    ]
}

fn reject_n(entry: &'static str, params: &CatalogParams) -> Result<(), SprayError> {
    match params.n {
        Some(_) => Err(SprayError::UnsupportedParams {
            entry,
            reason: "takes no n parameter".into(),
        }),
        None => Ok(()),
    }
}

fn reject_delta(entry: &'static str, params: &CatalogParams) -> Result<(), SprayError> {
    match params.delta {
        Some(_) => Err(SprayError::UnsupportedParams {
            entry,
            reason: "its neighborhood depth is fixed by the closed form".into(),
        }),
        None => Ok(()),
    }
}

/// Look up a catalog entry by name.
pub fn catalog_get(name: &str, params: &CatalogParams) -> Result<CatalogEntry, SprayError> {
    match name {
        "cantor-string" => {
            reject_n("cantor-string", params)?;
            reject_delta("cantor-string", params)?;
            Ok(cantor_string())
        }
        "cantor-graph" => {
            reject_n("cantor-graph", params)?;
            reject_delta("cantor-graph", params)?;
            Ok(cantor_graph())
        }
        "cantor-grill" => {
            reject_n("cantor-grill", params)?;
            reject_delta("cantor-grill", params)?;
            Ok(cantor_grill())
        }
        "cantor-dust" => {
            reject_n("cantor-dust", params)?;
            reject_delta("cantor-dust", params)?;
            Ok(cantor_dust())
        }
        "unit-interval" => {
            reject_n("unit-interval", params)?;
            let delta = params.delta.unwrap_or(1.0);
            if !(delta > 0.0 && delta.is_finite()) {
                return Err(SprayError::UnsupportedParams {
                    entry: "unit-interval",
                    reason: format!("delta must be positive, got {delta}"),
                });
            }
            Ok(unit_interval(delta))
        }
        "sierpinski-gasket" => {
            reject_n("sierpinski-gasket", params)?;
            reject_delta("sierpinski-gasket", params)?;
            Ok(sierpinski_gasket())
        }
        "sierpinski-carpet" => {
            reject_n("sierpinski-carpet", params)?;
            reject_delta("sierpinski-carpet", params)?;
            Ok(sierpinski_carpet())
        }
        "sierpinski-3d-carpet" => {
            reject_n("sierpinski-3d-carpet", params)?;
            reject_delta("sierpinski-3d-carpet", params)?;
            Ok(sierpinski_3d_carpet())
        }
        "half-square" => {
            reject_n("half-square", params)?;
            reject_delta("half-square", params)?;
            Ok(half_square())
        }
        "third-square" => {
            reject_n("third-square", params)?;
            reject_delta("third-square", params)?;
            Ok(third_square())
        }
        "n-gasket" => {
            reject_delta("n-gasket", params)?;
            n_gasket(params.n.unwrap_or(2))
        }
        "n-carpet" => {
            reject_delta("n-carpet", params)?;
            n_carpet(params.n.unwrap_or(2))
        }
        "sphere" => sphere(params.n.unwrap_or(2), params.delta.unwrap_or(1.0)),
        "sphere-in-ball" => {
            reject_delta("sphere-in-ball", params)?;
            sphere_in_ball(params.n.unwrap_or(2))
        }
        other => Err(SprayError::UnknownEntry(other.to_string())),
    }
}
