use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Monomial, MonomialOrder, PolyError, Rat};

/// Variable names plus the monomial order every polynomial of the ring is sorted by.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
    order: MonomialOrder,
}

impl Ring {
    pub fn new<S: Into<String>>(
        vars: impl IntoIterator<Item = S>,
        order: MonomialOrder,
    ) -> Arc<Ring> {
        Arc::new(Ring {
            vars: vars.into_iter().map(Into::into).collect(),
            order,
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables, different order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<Ring> {
        Arc::new(Ring {
            vars: self.vars.clone(),
            order,
        })
    }
}

/// Sparse multivariate polynomial over the rationals.
///
/// Terms are kept strictly decreasing in the ring's order and never carry a
/// zero coefficient; the zero polynomial has no terms.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, Rat)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        MultiPoly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: Rat) -> Self {
        let mut p = MultiPoly::zero(ring);
        if !c.is_zero() {
            p.terms.push((Monomial::one(ring.nvars()), c));
        }
        p
    }

    pub fn var(ring: &Arc<Ring>, index: usize) -> Self {
        MultiPoly {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.nvars(), index), Rat::one())],
        }
    }

    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Result<Self, PolyError> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(MultiPoly::var(ring, i))
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut acc: HashMap<Monomial, Rat> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(
                m.nvars(),
                ring.nvars(),
                "monomial arity does not match ring"
            );
            *acc.entry(m).or_insert_with(Rat::zero) += c;
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<Ring>, acc: HashMap<Monomial, Rat>) -> Self {
        let mut terms: Vec<(Monomial, Rat)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        MultiPoly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Wraps terms already sorted and nonzero.
    pub(crate) fn from_sorted_terms(ring: &Arc<Ring>, terms: Vec<(Monomial, Rat)>) -> Self {
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.order().cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        MultiPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Same as [`is_zero`](Self::is_zero).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u16> {
        self.terms.iter().map(|(m, _)| m.exponents()[var]).max()
    }

    /// Indices of variables that occur with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exponents()[i] > 0))
            .collect()
    }

    fn check_ring(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.ring.vars == other.ring.vars {
            Ok(())
        } else {
            Err(PolyError::VariableMismatch {
                left: self.ring.vars.clone(),
                right: other.ring.vars.clone(),
            })
        }
    }

    /// `other` sorted in this polynomial's ring (same variable list required).
    fn aligned<'a>(
        &self,
        other: &'a MultiPoly,
    ) -> Result<std::borrow::Cow<'a, MultiPoly>, PolyError> {
        self.check_ring(other)?;
        if self.ring.order == other.ring.order {
            Ok(std::borrow::Cow::Borrowed(other))
        } else {
            Ok(std::borrow::Cow::Owned(
                other.with_order(self.ring.order.clone()),
            ))
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        let other = self.aligned(other)?;
        Ok(self.merge(&other, false))
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        let other = self.aligned(other)?;
        Ok(self.merge(&other, true))
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        let other = self.aligned(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MultiPoly::zero(&self.ring));
        }
        let mut acc: HashMap<Monomial, Rat> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma * mb).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        Ok(MultiPoly::from_map(&self.ring, acc))
    }

    fn merge(&self, other: &MultiPoly, subtract: bool) -> MultiPoly {
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.len() + other.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (m, c) = b.next().unwrap();
                    out.push((m.clone(), if subtract { -c } else { c.clone() }));
                }
                (Some((ma, _)), Some((mb, _))) => match order.cmp(ma, mb) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => {
                        let (m, c) = b.next().unwrap();
                        out.push((m.clone(), if subtract { -c } else { c.clone() }));
                    }
                    Ordering::Equal => {
                        let (m, ca) = a.next().unwrap();
                        let (_, cb) = b.next().unwrap();
                        let c = if subtract { ca - cb } else { ca + cb };
                        if !c.is_zero() {
                            out.push((m.clone(), c));
                        }
                    }
                },
            }
        }
        MultiPoly::from_sorted_terms(&self.ring, out)
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly::from_sorted_terms(
            &self.ring,
            self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        )
    }

    /// Multiplication by the single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly::from_sorted_terms(
            &self.ring,
            self.terms.iter().map(|(t, a)| (t * m, a * c)).collect(),
        )
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(&self.ring, Rat::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Re-sorts the terms under `order`.
    pub fn with_order(&self, order: MonomialOrder) -> MultiPoly {
        if self.ring.order == order {
            return self.clone();
        }
        let ring = self.ring.with_order(order);
        self.in_ring_unchecked(&ring)
    }

    /// Moves the polynomial into `ring`, which must have the same variables.
    pub fn in_ring(&self, ring: &Arc<Ring>) -> Result<MultiPoly, PolyError> {
        if ring.vars != self.ring.vars {
            return Err(PolyError::VariableMismatch {
                left: self.ring.vars.clone(),
                right: ring.vars.clone(),
            });
        }
        Ok(self.in_ring_unchecked(ring))
    }

    fn in_ring_unchecked(&self, ring: &Arc<Ring>) -> MultiPoly {
        let mut terms = self.terms.clone();
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        MultiPoly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Rewrites the polynomial over `ring`, matching variables by name.
    ///
    /// Fails if a variable in the support is missing from `ring`.
    pub fn rename_into(&self, ring: &Arc<Ring>) -> Result<MultiPoly, PolyError> {
        let mut map = Vec::with_capacity(self.ring.nvars());
        for (i, v) in self.ring.vars.iter().enumerate() {
            let target = ring.index_of(v);
            if target.is_none() && self.terms.iter().any(|(m, _)| m.exponents()[i] > 0) {
                return Err(PolyError::UnknownVariable(v.clone()));
            }
            map.push(target);
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0u16; ring.nvars()];
            for (i, &x) in m.exponents().iter().enumerate() {
                if let Some(j) = map[i] {
                    e[j] += x;
                }
            }
            (Monomial::from_exponents(e), c.clone())
        });
        Ok(MultiPoly::from_terms(ring, terms))
    }

    /// Substitutes `value` for variable `var`; the variable stays in the ring with exponent zero.
    pub fn specialize(&self, var: usize, value: &Rat) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| {
            let e = m.exponents()[var];
            let mut ex = m.exponents().to_vec();
            ex[var] = 0;
            (Monomial::from_exponents(ex), c * pow_rat(value, e as u32))
        });
        MultiPoly::from_terms(&self.ring, terms)
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.ring.nvars());
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= pow_rat(x, e as u32);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.ring.nvars());
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = rat_to_f64(c);
                for (x, &e) in point.iter().zip(m.exponents()) {
                    if e > 0 {
                        t *= x.powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Largest coefficient magnitude as a float.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms
            .iter()
            .map(|(_, c)| rat_to_f64(c).abs())
            .fold(0.0, f64::max)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Integer coefficients with gcd 1 and a positive leading coefficient,
    /// i.e. the canonical representative of the polynomial up to a rational scalar.
    pub fn primitive(&self) -> MultiPoly {
        let ints = self.primitive_integer_coeffs();
        MultiPoly::from_sorted_terms(
            &self.ring,
            self.terms
                .iter()
                .zip(ints)
                .map(|((m, _), c)| (m.clone(), Rat::from_integer(c)))
                .collect(),
        )
    }

    pub(crate) fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den_lcm = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .terms
            .iter()
            .map(|(_, c)| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints[0].is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let div = g * sign;
        for c in &mut ints {
            *c = &*c / &div;
        }
        ints
    }

    /// Exact quotient if `divisor` divides `self`, else `None`.
    pub fn divide_exact(&self, divisor: &MultiPoly) -> Result<Option<MultiPoly>, PolyError> {
        let d = self.aligned(divisor)?;
        let division = super::reduce(self, std::slice::from_ref(d.as_ref()));
        if division.remainder.is_zero() {
            Ok(Some(division.quotients.into_iter().next().unwrap()))
        } else {
            Ok(None)
        }
    }
}

pub(crate) fn pow_rat(x: &Rat, e: u32) -> Rat {
    num_traits::pow(x.clone(), e as usize)
}

/// Nearest `f64`, also for ratios whose parts overflow.
pub fn rat_to_f64(c: &Rat) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // ratio of huge integers: scale through the bit lengths
        let n = c.numer();
        let d = c.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(1000) as usize;
        let n2: BigInt = n >> shift;
        let d2: BigInt = d >> shift;
        n2.to_f64().unwrap_or(f64::NAN) / d2.to_f64().unwrap_or(f64::NAN)
    })
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs)
            .expect("polynomials over different variable lists")
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs)
            .expect("polynomials over different variable lists")
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs)
            .expect("polynomials over different variable lists")
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::from_sorted_terms(
            &self.ring,
            self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        )
    }
}
