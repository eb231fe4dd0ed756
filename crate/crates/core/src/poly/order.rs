use std::cmp::Ordering;

use super::Monomial;

/// Admissible monomial orders.
///
/// `BlockElim` compares the exponents of the front block first (graded
/// reverse lexicographic within the block) and breaks ties on the remaining
/// variables the same way. Any monomial containing a front-block variable is
/// therefore larger than every monomial free of them, which is what makes the
/// order eliminate the front block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    BlockElim { front: Vec<usize>, back: Vec<usize> },
}

impl MonomialOrder {
    /// Block elimination order over `nvars` variables with `front` eliminated first.
    pub fn block_elim(front: &[usize], nvars: usize) -> Self {
        let mut f: Vec<usize> = front.to_vec();
        f.sort_unstable();
        f.dedup();
        let back = (0..nvars).filter(|i| !f.contains(i)).collect();
        MonomialOrder::BlockElim { front: f, back }
    }

    /// Mask of the variables an elimination order removes (empty for other orders).
    pub fn front_mask(&self, nvars: usize) -> Vec<bool> {
        let mut mask = vec![false; nvars];
        if let MonomialOrder::BlockElim { front, .. } = self {
            for &i in front {
                mask[i] = true;
            }
        }
        mask
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GrevLex => grevlex(a.exponents(), b.exponents(), a.degree(), b.degree()),
            MonomialOrder::Lex => a.exponents().cmp(b.exponents()),
            MonomialOrder::BlockElim { front, back } => {
                block_grevlex(a.exponents(), b.exponents(), front)
                    .then_with(|| block_grevlex(a.exponents(), b.exponents(), back))
            }
        }
    }
}

#[inline]
fn grevlex(a: &[u16], b: &[u16], da: u32, db: u32) -> Ordering {
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b.iter()).rev() {
        if x != y {
            // smaller exponent in the last differing variable wins
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

#[inline]
fn block_grevlex(a: &[u16], b: &[u16], block: &[usize]) -> Ordering {
    let da: u32 = block.iter().map(|&i| a[i] as u32).sum();
    let db: u32 = block.iter().map(|&i| b[i] as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for &i in block.iter().rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn grevlex_textbook_cases() {
        let o = MonomialOrder::GrevLex;
        // x^2 y z^2 < x y^3 z under grevlex (same degree, z exponent decides)
        assert_eq!(o.cmp(&m(&[2, 1, 2]), &m(&[1, 3, 1])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[0, 0, 3]), &m(&[1, 0, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 1, 0])), Ordering::Greater);
    }

    #[test]
    fn block_elim_puts_front_first() {
        let o = MonomialOrder::block_elim(&[0], 3);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[0, 1, 0])), Ordering::Greater);
    }

    fn arb_mono() -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u16..4, 4).prop_map(Monomial::from_exponents)
    }

    fn orders() -> Vec<MonomialOrder> {
        vec![
            MonomialOrder::GrevLex,
            MonomialOrder::Lex,
            MonomialOrder::block_elim(&[1, 3], 4),
        ]
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative(a in arb_mono(), b in arb_mono(), c in arb_mono()) {
            for o in orders() {
                prop_assert_eq!(o.cmp(&a, &b), o.cmp(&(&a * &c), &(&b * &c)));
            }
        }

        #[test]
        fn orders_are_total_and_well_founded(a in arb_mono(), b in arb_mono()) {
            for o in orders() {
                prop_assert_eq!(o.cmp(&a, &b) == Ordering::Equal, a == b);
                prop_assert_eq!(o.cmp(&a, &b), o.cmp(&b, &a).reverse());
                prop_assert_ne!(o.cmp(&a, &Monomial::one(4)), Ordering::Less);
            }
        }
    }
}
