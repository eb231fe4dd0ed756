//! Exact linear factors of a bivariate polynomial.
//!
//! Candidates come from two places: lines fitted to traced points, and lines
//! through rational roots of two horizontal slices (plus horizontal lines from
//! a vertical slice). Every candidate is confirmed by exact division, so a bad
//! candidate costs time, never correctness.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::{rat_to_f64, MultiPoly, Rat};
use crate::solver::fit_points;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearFactors {
    /// Primitive integer linear polynomials with their multiplicities.
    pub factors: Vec<(MultiPoly, u32)>,
    /// What is left after dividing every factor out.
    pub cofactor: MultiPoly,
}

impl LinearFactors {
    /// `Π factorᵐ · cofactor`.
    pub fn product(&self) -> MultiPoly {
        let mut p = self.cofactor.clone();
        for (f, m) in &self.factors {
            p = &p * &f.pow(*m);
        }
        p
    }
}

/// Slice positions, tried in turn until two give full-degree slices.
const PROBES: [(i64, i64); 8] = [
    (1, 3),
    (-2, 7),
    (3, 11),
    (-5, 13),
    (7, 17),
    (-4, 19),
    (9, 23),
    (-8, 29),
];

/// Largest denominator tried when turning a float root into a rational.
const MAX_DEN: i64 = 100_000;

/// Linear factors of `p`, a polynomial in exactly two variables (first is
/// the abscissa). `hints` are points believed to lie on a line of the curve.
pub fn extract_linear_factors(p: &MultiPoly, hints: &[[f64; 2]]) -> LinearFactors {
    assert_eq!(p.ring().nvars(), 2, "bivariate polynomial expected");
    let mut candidates: Vec<MultiPoly> = Vec::new();
    if hints.len() >= 2 {
        if let Ok(s) = fit_points(hints) {
            candidates.extend(rationalized_line(p, s.line.a, s.line.b, s.line.c));
        }
    }
    if !p.is_zero() && !p.is_constant() {
        candidates.extend(slice_candidates(p));
    }

    let mut seen = BTreeSet::new();
    let mut rest = p.clone();
    let mut factors = Vec::new();
    for c in candidates {
        let c = c.primitive();
        if c.total_degree() != Some(1) || !seen.insert(c.to_normalized_string()) {
            continue;
        }
        let mut mult = 0;
        while let Ok(Some(q)) = rest.divide_exact(&c) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            factors.push((c, mult));
        }
    }
    factors.sort_by_key(|(f, _)| f.to_normalized_string());
    LinearFactors {
        factors,
        cofactor: rest,
    }
}

fn line(p: &MultiPoly, a: Rat, b: Rat, c: Rat) -> MultiPoly {
    let ring = p.ring();
    &(&MultiPoly::var(ring, 0).scale(&a) + &MultiPoly::var(ring, 1).scale(&b))
        + &MultiPoly::constant(ring, c)
}

/// The fitted line scaled so its larger direction coefficient is one, with
/// the other two read back as nearby rationals.
fn rationalized_line(p: &MultiPoly, a: f64, b: f64, c: f64) -> Vec<MultiPoly> {
    let (a, b, c) = if a.abs() >= b.abs() {
        (1.0, b / a, c / a)
    } else {
        (a / b, 1.0, c / b)
    };
    let mut out = Vec::new();
    for den in [100, 10_000, MAX_DEN] {
        let (Some(ra), Some(rb), Some(rc)) = (nearest(a, den), nearest(b, den), nearest(c, den))
        else {
            continue;
        };
        out.push(line(p, ra, rb, rc));
    }
    out
}

fn slice_candidates(p: &MultiPoly) -> Vec<MultiPoly> {
    let dx = p.degree_in(0).unwrap_or(0);
    let dy = p.degree_in(1).unwrap_or(0);
    let mut out = Vec::new();

    // two horizontal slices; a line meets each at a rational abscissa
    let mut rows: Vec<(Rat, Vec<Rat>)> = Vec::new();
    for &(n, d) in &PROBES {
        let y0 = Rat::new(BigInt::from(n), BigInt::from(d));
        let slice = univariate(&p.specialize(1, &y0), 0);
        if slice.iter().all(Zero::is_zero) {
            // the whole row y = y0 is a component
            out.push(line(p, Rat::zero(), Rat::one(), -y0));
            continue;
        }
        if slice.len() as u16 != dx + 1 {
            continue;
        }
        rows.push((y0, rational_roots(&slice)));
        if rows.len() == 2 {
            break;
        }
    }
    if let [(y0, r0), (y1, r1)] = rows.as_slice() {
        for x0 in r0 {
            for x1 in r1 {
                // (y1 - y0)(x - x0) - (x1 - x0)(y - y0)
                let a = y1 - y0;
                let b = x0 - x1;
                let c = -(&a * x0) - &b * y0;
                out.push(line(p, a, b, c));
            }
        }
    }

    // horizontal lines y = s meet a vertical slice at s
    for &(n, d) in &PROBES {
        let x0 = Rat::new(BigInt::from(n), BigInt::from(d));
        let slice = univariate(&p.specialize(0, &x0), 1);
        if slice.iter().all(Zero::is_zero) {
            out.push(line(p, Rat::one(), Rat::zero(), -x0));
            continue;
        }
        if slice.len() as u16 != dy + 1 {
            continue;
        }
        for s in rational_roots(&slice) {
            out.push(line(p, Rat::zero(), Rat::one(), -s));
        }
        break;
    }
    out
}

/// Coefficients of a polynomial in variable `var` only, lowest degree first,
/// trailing zeros trimmed.
fn univariate(p: &MultiPoly, var: usize) -> Vec<Rat> {
    let deg = p.degree_in(var).unwrap_or(0) as usize;
    let mut c = vec![Rat::zero(); deg + 1];
    for (m, k) in p.terms() {
        c[m.exponents()[var] as usize] += k;
    }
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

fn horner(c: &[Rat], x: &Rat) -> Rat {
    c.iter().rev().fold(Rat::zero(), |acc, k| acc * x + k)
}

/// Rational roots, found as float roots and confirmed exactly.
fn rational_roots(c: &[Rat]) -> Vec<Rat> {
    let mut c: Vec<Rat> = c.to_vec();
    let mut out = Vec::new();
    // zero roots first; they also keep the companion matrix well posed
    if c.len() > 1 && c[0].is_zero() {
        out.push(Rat::zero());
        while c.len() > 1 && c[0].is_zero() {
            c.remove(0);
        }
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return out;
    }
    let lead = c[deg].clone();
    let monic: Vec<f64> = c.iter().map(|k| rat_to_f64(&(k / &lead))).collect();
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -monic[i];
    }
    for z in comp.complex_eigenvalues().iter() {
        // repeated roots come out with errors near the square root of epsilon
        if z.im.abs() > 1e-4 * (1.0 + z.re.abs()) {
            continue;
        }
        if let Some(r) = confirm(&c, z.re) {
            if !out.contains(&r) {
                out.push(r);
            }
        }
    }
    out
}

/// The continued-fraction convergent of `x` nearest to it that is an exact root.
fn confirm(c: &[Rat], x: f64) -> Option<Rat> {
    convergents(x, MAX_DEN)
        .into_iter()
        .rev()
        .find(|r| horner(c, r).is_zero())
}

fn nearest(x: f64, max_den: i64) -> Option<Rat> {
    let conv = convergents(x, max_den);
    conv.into_iter()
        .find(|r| (rat_to_f64(r) - x).abs() <= 1e-9 * (1.0 + x.abs()))
}

fn convergents(x: f64, max_den: i64) -> Vec<Rat> {
    if !x.is_finite() || x.abs() > 1e12 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        out.push(Rat::new(h2.clone(), k2.clone()));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    out
}
