//! Buchberger's algorithm with the Gebauer–Möller pair criteria.
//!
//! The working representation inside the completion loop keeps integer
//! coefficients and reduces fraction-free, stripping the content after every
//! normal form. Results are handed back as monic rational polynomials.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Monomial, MonomialOrder, MultiPoly, PolyError, Rat, Ring};

pub const DEFAULT_PAIR_BUDGET: usize = 200_000;

#[derive(Clone, Debug)]
pub struct GroebnerConfig {
    /// Maximum number of S-pairs reduced before giving up.
    pub pair_budget: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            pair_budget: DEFAULT_PAIR_BUDGET,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroebnerStats {
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub pairs_skipped: usize,
}

/// Reduced Gröbner basis: monic, inter-reduced, sorted by ascending leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    polys: Vec<MultiPoly>,
    stats: GroebnerStats,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn into_polys(self) -> Vec<MultiPoly> {
        self.polys
    }

    pub fn stats(&self) -> &GroebnerStats {
        &self.stats
    }

    /// Normal form of `p` modulo the basis.
    pub fn normal_form(&self, p: &MultiPoly) -> MultiPoly {
        let p = p
            .in_ring(&self.ring)
            .expect("polynomial over a different variable list");
        super::reduce(&p, &self.polys).remainder
    }

    pub fn contains(&self, p: &MultiPoly) -> bool {
        self.normal_form(p).is_zero()
    }
}

/// Gröbner basis of the ideal generated by `generators` under `order`.
pub fn buchberger(
    generators: &[MultiPoly],
    order: &MonomialOrder,
) -> Result<GroebnerBasis, PolyError> {
    buchberger_with(generators, order, &GroebnerConfig::default())
}

pub fn buchberger_with(
    generators: &[MultiPoly],
    order: &MonomialOrder,
    config: &GroebnerConfig,
) -> Result<GroebnerBasis, PolyError> {
    let first = generators.first().ok_or(PolyError::EmptyGenerators)?;
    let ring = first.ring().with_order(order.clone());
    let mut inputs = Vec::with_capacity(generators.len());
    for g in generators {
        let g = g.in_ring(&ring)?;
        if !g.is_zero() {
            inputs.push(IPoly::from_rational(&g));
        }
    }
    let mut engine = Engine {
        order: order.clone(),
        store: Vec::new(),
        basis: Vec::new(),
        pairs: Vec::new(),
        stats: GroebnerStats::default(),
    };
    // low degree generators first keeps the early reducers small
    inputs.sort_by(|a, b| engine.order.cmp(a.lm(), b.lm()));
    for f in inputs {
        let h = engine.normal_form(f);
        if !h.is_zero() {
            engine.insert(h);
        }
    }
    engine.complete(config.pair_budget)?;
    let polys = engine.reduced_basis(&ring);
    Ok(GroebnerBasis {
        ring,
        polys,
        stats: engine.stats,
    })
}

/// Generators of the elimination ideal `⟨F⟩ ∩ ℚ[keep]`.
///
/// Uses a block order eliminating every variable outside `keep`; the result is
/// expressed over a ring containing only the `keep` variables (grevlex), each
/// generator primitive with integer coefficients.
pub fn eliminate(generators: &[MultiPoly], keep: &[&str]) -> Result<Vec<MultiPoly>, PolyError> {
    eliminate_with(generators, keep, &GroebnerConfig::default())
}

pub fn eliminate_with(
    generators: &[MultiPoly],
    keep: &[&str],
    config: &GroebnerConfig,
) -> Result<Vec<MultiPoly>, PolyError> {
    let first = generators.first().ok_or(PolyError::EmptyGenerators)?;
    let ring = first.ring();
    let mut keep_idx = Vec::with_capacity(keep.len());
    for k in keep {
        keep_idx.push(
            ring.index_of(k)
                .ok_or_else(|| PolyError::UnknownVariable(k.to_string()))?,
        );
    }
    let front: Vec<usize> = (0..ring.nvars())
        .filter(|i| !keep_idx.contains(i))
        .collect();
    let order = MonomialOrder::block_elim(&front, ring.nvars());
    let gb = buchberger_with(generators, &order, config)?;
    let mask = order.front_mask(ring.nvars());
    let target = Ring::new(keep.iter().copied(), MonomialOrder::GrevLex);
    let mut out: Vec<MultiPoly> = gb
        .polys()
        .iter()
        .filter(|g| g.terms().iter().all(|(m, _)| !m.involves_any(&mask)))
        .map(|g| {
            MultiPoly::from_terms(
                &target,
                g.terms()
                    .iter()
                    .map(|(m, c)| (m.project(&keep_idx), c.clone())),
            )
            .primitive()
        })
        .collect();
    out.sort_by_key(|p| (p.total_degree(), p.len()));
    Ok(out)
}

/// Integer-coefficient polynomial used inside the completion loop.
#[derive(Clone, Debug)]
struct IPoly {
    terms: Vec<(Monomial, BigInt)>,
}

impl IPoly {
    fn from_rational(p: &MultiPoly) -> IPoly {
        let coeffs = p.primitive_integer_coeffs();
        IPoly {
            terms: p
                .terms()
                .iter()
                .map(|(m, _)| m.clone())
                .zip(coeffs)
                .collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    fn make_primitive(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in &mut self.terms {
                *c = &*c / &g;
            }
        }
    }
}

/// `a·f − b·(m·g)`, both sorted under `order`.
fn axpy(
    order: &MonomialOrder,
    a: &BigInt,
    f: &[(Monomial, BigInt)],
    b: &BigInt,
    m: &Monomial,
    g: &[(Monomial, BigInt)],
) -> Vec<(Monomial, BigInt)> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let mut i = 0;
    let mut j = 0;
    let mut gm: Option<Monomial> = g.first().map(|t| m * &t.0);
    while i < f.len() || gm.is_some() {
        let ord = match (&gm, f.get(i)) {
            (None, _) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(x), Some((fm, _))) => order.cmp(fm, x),
        };
        match ord {
            Ordering::Greater => {
                out.push((f[i].0.clone(), a * &f[i].1));
                i += 1;
            }
            Ordering::Less => {
                out.push((gm.take().unwrap(), -(b * &g[j].1)));
                j += 1;
                gm = g.get(j).map(|t| m * &t.0);
            }
            Ordering::Equal => {
                let c = a * &f[i].1 - b * &g[j].1;
                if !c.is_zero() {
                    out.push((f[i].0.clone(), c));
                }
                i += 1;
                j += 1;
                gm = g.get(j).map(|t| m * &t.0);
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Engine {
    order: MonomialOrder,
    store: Vec<IPoly>,
    basis: Vec<usize>,
    pairs: Vec<Pair>,
    stats: GroebnerStats,
}

impl Engine {
    /// Fully reduces `f` by the current basis (fraction-free).
    fn normal_form(&self, f: IPoly) -> IPoly {
        let reducers: Vec<&IPoly> = self.basis.iter().map(|&i| &self.store[i]).collect();
        let (mut r, _) = full_reduce(&self.order, &reducers, f);
        r.make_primitive();
        r
    }

    fn s_poly(&self, p: &Pair) -> IPoly {
        let f = &self.store[p.i];
        let g = &self.store[p.j];
        let mf = f.lm().quotient_of(&p.lcm).unwrap();
        let mg = g.lm().quotient_of(&p.lcm).unwrap();
        let gcd = f.lc().gcd(g.lc());
        let a = g.lc() / &gcd;
        let b = f.lc() / &gcd;
        // a·mf·f − b·mg·g; the leading terms cancel
        let f_shift: Vec<(Monomial, BigInt)> = f.terms[1..]
            .iter()
            .map(|(m, c)| (&mf * m, c.clone()))
            .collect();
        let terms = axpy(&self.order, &a, &f_shift, &b, &mg, &g.terms[1..]);
        IPoly { terms }
    }

    /// Adds `h` to the basis and updates the pair set (Gebauer–Möller).
    fn insert(&mut self, h: IPoly) {
        let hi = self.store.len();
        let hm = h.lm().clone();
        self.store.push(h);

        let mut candidates: Vec<Pair> = self
            .basis
            .iter()
            .map(|&g| Pair {
                i: g,
                j: hi,
                lcm: self.store[g].lm().lcm(&hm),
            })
            .collect();

        // chain criterion among the new pairs
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(p) = candidates.pop() {
            let gm = self.store[p.i].lm();
            let coprime = gm.is_coprime(&hm);
            let dominated = candidates
                .iter()
                .chain(kept.iter())
                .any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                kept.push(p);
            } else {
                self.stats.pairs_skipped += 1;
            }
        }
        let before = kept.len();
        kept.retain(|p| !self.store[p.i].lm().is_coprime(&hm));
        self.stats.pairs_skipped += before - kept.len();

        // old pairs made redundant by h
        let store = &self.store;
        let before = self.pairs.len();
        self.pairs.retain(|p| {
            !(hm.divides(&p.lcm)
                && store[p.i].lm().lcm(&hm) != p.lcm
                && store[p.j].lm().lcm(&hm) != p.lcm)
        });
        self.stats.pairs_skipped += before - self.pairs.len();
        self.pairs.extend(kept);

        self.basis.retain(|&g| !hm.divides(store[g].lm()));
        self.basis.push(hi);
    }

    fn complete(&mut self, budget: usize) -> Result<(), PolyError> {
        while !self.pairs.is_empty() {
            // normal strategy: smallest lcm first
            let order = &self.order;
            let (idx, _) = self
                .pairs
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| order.cmp(&a.lcm, &b.lcm))
                .unwrap();
            let pair = self.pairs.swap_remove(idx);
            if self.stats.pairs_reduced >= budget {
                return Err(PolyError::PairBudget {
                    budget,
                    basis_size: self.basis.len(),
                });
            }
            self.stats.pairs_reduced += 1;
            let s = self.s_poly(&pair);
            let h = self.normal_form(s);
            if h.is_zero() {
                self.stats.zero_reductions += 1;
            } else {
                self.insert(h);
            }
        }
        Ok(())
    }

    fn reduced_basis(&self, ring: &Arc<Ring>) -> Vec<MultiPoly> {
        // minimal basis: drop elements whose leading monomial another one divides
        let mut minimal: Vec<usize> = Vec::new();
        let mut idx = self.basis.clone();
        idx.sort_by(|&a, &b| self.order.cmp(self.store[a].lm(), self.store[b].lm()));
        for &i in &idx {
            let m = self.store[i].lm();
            if !minimal.iter().any(|&j| self.store[j].lm().divides(m)) {
                minimal.push(i);
            }
        }
        let mut out = Vec::with_capacity(minimal.len());
        for &i in &minimal {
            let reducers: Vec<&IPoly> = minimal
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| &self.store[j])
                .collect();
            let f = &self.store[i];
            // the leading term is irreducible by the others; only the tail moves
            let tail = IPoly {
                terms: f.terms[1..].to_vec(),
            };
            let (r, scale) = full_reduce(&self.order, &reducers, tail);
            let lc = Rat::from_integer(f.lc() * &scale);
            let mut terms = Vec::with_capacity(r.terms.len() + 1);
            terms.push((f.lm().clone(), Rat::one()));
            terms.extend(
                r.terms
                    .into_iter()
                    .map(|(m, c)| (m, Rat::from_integer(c) / &lc)),
            );
            out.push(MultiPoly::from_sorted_terms(ring, terms));
        }
        out
    }
}

/// Fraction-free full reduction of `f` by `reducers`.
///
/// Returns the remainder together with the integer the input was scaled by,
/// so that `scale·f − remainder` lies in the ideal.
fn full_reduce(order: &MonomialOrder, reducers: &[&IPoly], mut f: IPoly) -> (IPoly, BigInt) {
    let mut scale = BigInt::one();
    let mut k = 0;
    while k < f.terms.len() {
        let m = &f.terms[k].0;
        match reducers.iter().find(|g| g.lm().divides(m)) {
            None => k += 1,
            Some(g) => {
                let q = g.lm().quotient_of(m).unwrap();
                let c = &f.terms[k].1;
                let gcd = c.gcd(g.lc());
                let a = g.lc() / &gcd;
                let b = c / &gcd;
                // terms before k only pick up the factor `a`
                let mut next = Vec::with_capacity(f.terms.len() + g.terms.len());
                for (mm, cc) in &f.terms[..k] {
                    next.push((mm.clone(), &a * cc));
                }
                next.extend(axpy(order, &a, &f.terms[k..], &b, &q, &g.terms));
                f.terms = next;
                scale *= &a;
            }
        }
    }
    (f, scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{reduce, s_polynomial};

    fn ring(vars: &[&str], order: MonomialOrder) -> Arc<Ring> {
        Ring::new(vars.iter().copied(), order)
    }

    fn assert_groebner(gb: &GroebnerBasis) {
        let g = gb.polys();
        for a in 0..g.len() {
            for b in a + 1..g.len() {
                let s = s_polynomial(&g[a], &g[b]);
                assert!(
                    reduce(&s, g).remainder.is_zero(),
                    "S({a},{b}) does not reduce to zero"
                );
            }
            assert!(g[a].leading_coeff().unwrap().is_one());
            for b in 0..g.len() {
                if a != b {
                    let la = g[a].leading_monomial().unwrap();
                    for (m, _) in g[b].terms() {
                        assert!(!la.divides(m), "basis is not inter-reduced");
                    }
                }
            }
        }
    }

    #[test]
    fn single_linear_generator() {
        let r = ring(&["x"], MonomialOrder::GrevLex);
        let f = MultiPoly::parse(&r, "x - 1").unwrap();
        let gb = buchberger(std::slice::from_ref(&f), &MonomialOrder::GrevLex).unwrap();
        assert_eq!(gb.polys(), &[f]);
    }

    #[test]
    fn circle_meets_diagonal() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let f = vec![
            MultiPoly::parse(&r, "x^2 + y^2 - 1").unwrap(),
            MultiPoly::parse(&r, "x - y").unwrap(),
        ];
        let gb = buchberger(&f, &MonomialOrder::Lex).unwrap();
        assert_groebner(&gb);
        let expected = MultiPoly::parse(gb.ring(), "y^2 - 1/2").unwrap();
        assert!(gb.polys().contains(&expected));
        for p in &f {
            assert!(gb.contains(p));
        }
    }

    #[test]
    fn cyclic3_grevlex() {
        let r = ring(&["a", "b", "c"], MonomialOrder::GrevLex);
        let f: Vec<MultiPoly> = ["a + b + c", "a*b + b*c + c*a", "a*b*c - 1"]
            .iter()
            .map(|s| MultiPoly::parse(&r, s).unwrap())
            .collect();
        let gb = buchberger(&f, &MonomialOrder::GrevLex).unwrap();
        assert_groebner(&gb);
        for p in &f {
            assert!(gb.contains(p));
        }
        // cyclic-3 reduced grevlex basis: a+b+c, b^2+bc+c^2, c^3-1
        assert_eq!(gb.polys().len(), 3);
    }

    #[test]
    fn parabola_elimination() {
        let r = ring(&["t", "x", "y"], MonomialOrder::GrevLex);
        let f = vec![
            MultiPoly::parse(&r, "x - t").unwrap(),
            MultiPoly::parse(&r, "y - t^2").unwrap(),
        ];
        let e = eliminate(&f, &["x", "y"]).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].to_normalized_string(), "x^2 - y");
    }

    #[test]
    fn circle_parametrization_elimination() {
        let r = ring(&["c", "s", "x", "y"], MonomialOrder::GrevLex);
        let f: Vec<MultiPoly> = ["x - c", "y - s", "c^2 + s^2 - 1"]
            .iter()
            .map(|s| MultiPoly::parse(&r, s).unwrap())
            .collect();
        let e = eliminate(&f, &["x", "y"]).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].to_normalized_string(), "x^2 + y^2 - 1");
    }

    #[test]
    fn pair_budget_aborts() {
        let r = ring(&["a", "b", "c", "d"], MonomialOrder::GrevLex);
        let f: Vec<MultiPoly> = [
            "a + b + c + d",
            "a*b + b*c + c*d + d*a",
            "a*b*c + b*c*d + c*d*a + d*a*b",
            "a*b*c*d - 1",
        ]
        .iter()
        .map(|s| MultiPoly::parse(&r, s).unwrap())
        .collect();
        let err = buchberger_with(
            &f,
            &MonomialOrder::GrevLex,
            &GroebnerConfig { pair_budget: 1 },
        );
        assert!(matches!(err, Err(PolyError::PairBudget { budget: 1, .. })));
    }
}
