use num_integer::binomial;

use super::{Bisection, FullGroupElement, MAlgElement, SemigroupError};
use crate::groupoid::{Arrow, FiniteGroupoid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnumKind {
    /// All bisections.
    Semigroup,
    /// Full-group elements.
    Group,
    /// Idempotents, i.e. subsets of the unit space.
    Malg,
}

/// Partial injections of `0..n` as `(from, to)` lists: by domain size, then
/// domain in lexicographic order, then image arrangement in lexicographic
/// order.
pub(crate) fn partial_injections(n: usize, bijective_only: bool) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let sizes = if bijective_only { n..=n } else { 0..=n };
    for k in sizes {
        for domain in combinations(n, k) {
            for image in arrangements(n, k) {
                out.push(domain.iter().copied().zip(image).collect());
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Injective sequences of length `k` in `0..n`, lexicographic.
fn arrangements(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(n, k, used, cur, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

impl FiniteGroupoid {
    /// Closed-form size of the requested set; saturates at `u128::MAX`.
    pub fn predicted_count(&self, kind: EnumKind) -> u128 {
        self.components().iter().fold(1u128, |acc, c| {
            let n = c.base_size as u128;
            let m = c.group.order() as u128;
            let per = match kind {
                EnumKind::Semigroup => (0..=n).fold(0u128, |s, k| {
                    let b = binomial(n, k);
                    let term = b
                        .saturating_mul(b)
                        .saturating_mul(factorial(k))
                        .saturating_mul(m.saturating_pow(k as u32));
                    s.saturating_add(term)
                }),
                EnumKind::Group => factorial(n).saturating_mul(m.saturating_pow(n as u32)),
                EnumKind::Malg => 1u128.checked_shl(n as u32).unwrap_or(u128::MAX),
            };
            acc.saturating_mul(per)
        })
    }

    fn ensure_cap(&self, kind: EnumKind, cap: u128) -> Result<(), SemigroupError> {
        let predicted = self.predicted_count(kind);
        if predicted > cap {
            return Err(SemigroupError::CapExceeded { predicted, cap });
        }
        Ok(())
    }

    /// Every element of the requested kind as a bisection, in a fixed order
    /// (component 0 varies slowest). Fails before doing any work if the
    /// predicted count exceeds `cap`.
    pub fn enumerate(&self, kind: EnumKind, cap: u128) -> Result<Vec<Bisection>, SemigroupError> {
        self.ensure_cap(kind, cap)?;
        let per_component: Vec<Vec<Vec<Arrow>>> = (0..self.components().len())
            .map(|c| self.component_pieces(c, kind))
            .collect();
        let mut acc: Vec<Vec<Arrow>> = vec![Vec::new()];
        for pieces in &per_component {
            let mut next = Vec::with_capacity(acc.len() * pieces.len());
            for prefix in &acc {
                for piece in pieces {
                    let mut v = prefix.clone();
                    v.extend_from_slice(piece);
                    next.push(v);
                }
            }
            acc = next;
        }
        // components occupy disjoint, increasing arrow ranges, so concatenation stays sorted
        Ok(acc
            .into_iter()
            .map(Bisection::from_sorted_unchecked)
            .collect())
    }

    pub fn enumerate_full_group(&self, cap: u128) -> Result<Vec<FullGroupElement>, SemigroupError> {
        Ok(self
            .enumerate(EnumKind::Group, cap)?
            .into_iter()
            .map(FullGroupElement::new_unchecked)
            .collect())
    }

    pub fn enumerate_malg(&self, cap: u128) -> Result<Vec<MAlgElement>, SemigroupError> {
        Ok(self
            .enumerate(EnumKind::Malg, cap)?
            .iter()
            .map(|b| self.source_set(b))
            .collect())
    }

    fn component_pieces(&self, c: usize, kind: EnumKind) -> Vec<Vec<Arrow>> {
        let comp = self.component(c);
        let n = comp.base_size;
        let m = comp.group.order();
        let maps = match kind {
            EnumKind::Malg => {
                return combinations_all(n)
                    .into_iter()
                    .map(|set| set.into_iter().map(|y| Arrow::new(c, 0, y, y)).collect())
                    .collect()
            }
            EnumKind::Group => partial_injections(n, true),
            EnumKind::Semigroup => partial_injections(n, false),
        };
        let mut out = Vec::new();
        for map in maps {
            let k = map.len();
            let total = m.pow(k as u32);
            for code in 0..total {
                let mut rest = code;
                let mut arrows: Vec<Arrow> = map
                    .iter()
                    .map(|&(x, y)| {
                        let g = rest % m;
                        rest /= m;
                        Arrow::new(c, g, y, x)
                    })
                    .collect();
                arrows.sort_unstable();
                out.push(arrows);
            }
        }
        out
    }
}

/// All subsets of `0..n`, by size then lexicographic.
fn combinations_all(n: usize) -> Vec<Vec<usize>> {
    (0..=n).flat_map(|k| combinations(n, k)).collect()
}
