use super::{MonomialOrder, MultiPoly};

/// Result of multivariate division: `p = Σ quotients[i]·divisors[i] + remainder`.
#[derive(Clone, Debug)]
pub struct Division {
    pub quotients: Vec<MultiPoly>,
    pub remainder: MultiPoly,
}

/// Full multivariate division of `p` by `divisors` under `p`'s ring order.
///
/// No term of the remainder is divisible by a leading monomial of a divisor.
/// Zero divisors are skipped (their quotient stays zero).
pub fn reduce(p: &MultiPoly, divisors: &[MultiPoly]) -> Division {
    let ring = p.ring().clone();
    let divisors: Vec<MultiPoly> = divisors
        .iter()
        .map(|g| {
            g.in_ring(&ring)
                .expect("divisor over a different variable list")
        })
        .collect();
    let mut quotients: Vec<Vec<_>> = vec![Vec::new(); divisors.len()];
    let mut remainder = Vec::new();
    let mut rest = p.clone();

    while let Some((m, c)) = rest.leading_term() {
        let (m, c) = (m.clone(), c.clone());
        let hit = divisors.iter().enumerate().find_map(|(i, g)| {
            let (gm, gc) = g.leading_term()?;
            gm.quotient_of(&m).map(|q| (i, q, &c / gc))
        });
        match hit {
            Some((i, q, coeff)) => {
                rest = &rest - &divisors[i].mul_term(&q, &coeff);
                quotients[i].push((q, coeff));
            }
            None => {
                remainder.push((m, c));
                rest = MultiPoly::from_sorted_terms(&ring, rest.terms()[1..].to_vec());
            }
        }
    }

    Division {
        quotients: quotients
            .into_iter()
            .map(|t| MultiPoly::from_terms(&ring, t))
            .collect(),
        remainder: MultiPoly::from_sorted_terms(&ring, remainder),
    }
}

/// Division after moving every input to `order`.
pub fn reduce_in_order(p: &MultiPoly, divisors: &[MultiPoly], order: &MonomialOrder) -> Division {
    let p = p.with_order(order.clone());
    let ring = p.ring().clone();
    let gs: Vec<MultiPoly> = divisors
        .iter()
        .map(|g| {
            g.in_ring(&ring)
                .expect("divisor over a different variable list")
        })
        .collect();
    reduce(&p, &gs)
}

/// S-polynomial `lcm/lt(f)·f − lcm/lt(g)·g`.
pub fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (fm, fc) = f.leading_term().expect("s-polynomial of zero");
    let (gm, gc) = g.leading_term().expect("s-polynomial of zero");
    let l = fm.lcm(gm);
    let a = f.mul_term(&fm.quotient_of(&l).unwrap(), &fc.recip());
    let b = g.mul_term(&gm.quotient_of(&l).unwrap(), &gc.recip());
    &a - &b
}

impl Division {
    /// `Σ qᵢ·gᵢ + r`, for checking the division identity.
    pub fn recombine(&self, divisors: &[MultiPoly]) -> MultiPoly {
        let mut acc = self.remainder.clone();
        for (q, g) in self.quotients.iter().zip(divisors) {
            if !q.is_zero() {
                acc = &acc + &(q * &g.in_ring(acc.ring()).unwrap());
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Ring;

    #[test]
    fn divisor_reduces_itself_to_zero() {
        let ring = Ring::new(["x", "y"], MonomialOrder::GrevLex);
        let g = MultiPoly::parse(&ring, "x^2*y - 3*y + 1").unwrap();
        let d = reduce(&g, std::slice::from_ref(&g));
        assert!(d.remainder.is_zero());
    }

    #[test]
    fn lex_division_by_x() {
        let ring = Ring::new(["x", "y"], MonomialOrder::Lex);
        let p = MultiPoly::parse(&ring, "x^2 + y^2").unwrap();
        let x = MultiPoly::parse(&ring, "x").unwrap();
        let d = reduce(&p, std::slice::from_ref(&x));
        assert_eq!(d.remainder, MultiPoly::parse(&ring, "y^2").unwrap());
        assert_eq!(d.quotients[0], x);
        assert_eq!(d.recombine(std::slice::from_ref(&x)), p);
    }

    #[test]
    fn remainder_terms_are_irreducible() {
        let ring = Ring::new(["x", "y", "z"], MonomialOrder::GrevLex);
        let p = MultiPoly::parse(&ring, "x^3*y + 2*x*y*z - z^4 + y").unwrap();
        let gs = vec![
            MultiPoly::parse(&ring, "x*y - z").unwrap(),
            MultiPoly::parse(&ring, "z^2 - x").unwrap(),
        ];
        let d = reduce(&p, &gs);
        for (m, _) in d.remainder.terms() {
            for g in &gs {
                assert!(!g.leading_monomial().unwrap().divides(m));
            }
        }
        assert_eq!(d.recombine(&gs), p);
    }
}
