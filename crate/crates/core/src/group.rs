//! Finite groups given by Cayley tables.
//!
//! Elements are indices `0..order`, the identity is always index `0`, and
//! `table[a][b]` is the product `ab`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CayleyError {
    #[error("Cayley table is empty")]
    Empty,
    #[error("row {row} has length {len}, expected {order}")]
    Ragged {
        row: usize,
        len: usize,
        order: usize,
    },
    #[error("entry table[{a}][{b}] = {value} is out of range")]
    OutOfRange { a: usize, b: usize, value: usize },
    #[error("index 0 is not a two-sided identity (fails at element {at})")]
    Identity { at: usize },
    #[error("row {row} is not a permutation")]
    RowNotBijective { row: usize },
    #[error("column {column} is not a permutation")]
    ColumnNotBijective { column: usize },
    #[error("associativity fails at ({a}, {b}, {c})")]
    Associativity { a: usize, b: usize, c: usize },
    #[error("element {at} has no inverse")]
    NoInverse { at: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CayleyTable {
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl CayleyTable {
    /// Validates the table exhaustively and builds it.
    #[allow(clippy::needless_range_loop)]
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, CayleyError> {
        let order = table.len();
        if order == 0 {
            return Err(CayleyError::Empty);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != order {
                return Err(CayleyError::Ragged {
                    row,
                    len: r.len(),
                    order,
                });
            }
            for (b, &value) in r.iter().enumerate() {
                if value >= order {
                    return Err(CayleyError::OutOfRange { a: row, b, value });
                }
            }
        }
        for at in 0..order {
            if table[0][at] != at || table[at][0] != at {
                return Err(CayleyError::Identity { at });
            }
        }
        for row in 0..order {
            if !is_permutation((0..order).map(|b| table[row][b]), order) {
                return Err(CayleyError::RowNotBijective { row });
            }
        }
        for column in 0..order {
            if !is_permutation((0..order).map(|a| table[a][column]), order) {
                return Err(CayleyError::ColumnNotBijective { column });
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = table[a][b];
                for c in 0..order {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(CayleyError::Associativity { a, b, c });
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(order);
        for a in 0..order {
            match (0..order).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
                Some(b) => inverses.push(b),
                None => return Err(CayleyError::NoInverse { at: a }),
            }
        }
        Ok(CayleyTable { table, inverses })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// The cyclic group Z_n with `a` standing for the residue `a`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Self::new(table).expect("cyclic table is a group")
    }

    /// The symmetric group on `k` letters. Elements are the permutations of
    /// `0..k` in lexicographic order (identity first); `ab` means "apply `b`,
    /// then `a`".
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations_lex(k);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed");
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let ab: Vec<usize> = (0..k).map(|x| a[b[x]]).collect();
                        index(&ab)
                    })
                    .collect()
            })
            .collect();
        Self::new(table).expect("symmetric table is a group")
    }

    /// Direct product; the pair `(a, b)` has index `a * other.order() + b`.
    pub fn direct_product(&self, other: &CayleyTable) -> Self {
        let m = other.order();
        let n = self.order() * m;
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        Self::new(table).expect("product of groups is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Subgroup membership test for an index set (closure under product and
    /// inverse, contains the identity).
    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let mut member = vec![false; self.order()];
        for &e in elems {
            if e >= self.order() {
                return false;
            }
            member[e] = true;
        }
        member[0]
            && elems.iter().all(|&a| member[self.inv(a)])
            && elems
                .iter()
                .all(|&a| elems.iter().all(|&b| member[self.mul(a, b)]))
    }
}

fn is_permutation(it: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    for v in it {
        if seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

pub(crate) fn permutations_lex(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groups_validate() {
        assert_eq!(CayleyTable::trivial().order(), 1);
        assert_eq!(CayleyTable::cyclic(4).order(), 4);
        let s3 = CayleyTable::symmetric(3);
        assert_eq!(s3.order(), 6);
        // S3 is not abelian
        assert!((0..6).any(|a| (0..6).any(|b| s3.mul(a, b) != s3.mul(b, a))));
        let z2z3 = CayleyTable::cyclic(2).direct_product(&CayleyTable::cyclic(3));
        assert_eq!(z2z3.order(), 6);
    }

    #[test]
    fn rejects_non_groups() {
        // {e, g} with g*g = g: associative monoid, no inverse for g
        let err = CayleyTable::new(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert_eq!(err, CayleyError::RowNotBijective { row: 1 });
        let err = CayleyTable::new(vec![vec![1, 0], vec![0, 1]]).unwrap_err();
        assert_eq!(err, CayleyError::Identity { at: 0 });
        let err = CayleyTable::new(vec![vec![0, 1], vec![1]]).unwrap_err();
        assert!(matches!(err, CayleyError::Ragged { row: 1, .. }));
        assert_eq!(CayleyTable::new(vec![]).unwrap_err(), CayleyError::Empty);
    }

    #[test]
    fn latin_square_that_is_not_associative() {
        // order-5 loop with identity 0 that is not a group
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            CayleyTable::new(t).unwrap_err(),
            CayleyError::Associativity { .. }
        ));
    }

    #[test]
    fn subgroups() {
        let z4 = CayleyTable::cyclic(4);
        assert!(z4.is_subgroup(&[0, 2]));
        assert!(!z4.is_subgroup(&[0, 1]));
        assert!(!z4.is_subgroup(&[2]));
    }
}
