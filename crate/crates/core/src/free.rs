//! Free groups on an indexed basis and their automorphisms.
//!
//! A [`FreeWord`] stores unit letters as nonzero `i32`s: `k > 0` is basis
//! element `k - 1`, `k < 0` its inverse. Words are kept freely reduced.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord(Vec<i32>);

impl FreeWord {
    pub fn new() -> Self {
        FreeWord(Vec::new())
    }

    /// The basis element `idx` (0-based).
    pub fn basis(idx: usize) -> Self {
        FreeWord(vec![idx as i32 + 1])
    }

    pub fn from_letters<I: IntoIterator<Item = i32>>(letters: I) -> Self {
        let mut w = FreeWord::new();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: i32) {
        debug_assert!(letter != 0);
        if self.0.last() == Some(&-letter) {
            self.0.pop();
        } else {
            self.0.push(letter);
        }
    }

    pub fn push_word(&mut self, other: &FreeWord) {
        for &l in &other.0 {
            self.push(l);
        }
    }

    pub fn push_inverse(&mut self, other: &FreeWord) {
        for &l in other.0.iter().rev() {
            self.push(-l);
        }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        w.push_word(other);
        w
    }

    /// Exponent sum of every basis element, for a basis of size `rank`.
    pub fn abelianize(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank];
        for &l in &self.0 {
            v[(l.unsigned_abs() - 1) as usize] += l.signum() as i64;
        }
        v
    }

    /// Largest basis index used plus one.
    pub fn support_rank(&self) -> usize {
        self.0
            .iter()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&l| {
                if l > 0 {
                    format!("x{}", l - 1)
                } else {
                    format!("x{}^-1", -l - 1)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// An endomorphism of the free group of rank `images.len()`, given by the
/// images of the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAut {
    images: Vec<FreeWord>,
}

impl FreeAut {
    pub fn identity(rank: usize) -> Self {
        FreeAut {
            images: (0..rank).map(FreeWord::basis).collect(),
        }
    }

    pub fn from_images(images: Vec<FreeWord>) -> Self {
        FreeAut { images }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn image(&self, idx: usize) -> &FreeWord {
        &self.images[idx]
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        let mut out = FreeWord::new();
        self.apply_into(w, &mut out);
        out
    }

    /// Appends the image of `w` to `out`.
    pub fn apply_into(&self, w: &FreeWord, out: &mut FreeWord) {
        for &l in w.letters() {
            let img = &self.images[(l.unsigned_abs() - 1) as usize];
            if l > 0 {
                out.push_word(img);
            } else {
                out.push_inverse(img);
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FreeAut) -> FreeAut {
        FreeAut {
            images: other.images.iter().map(|w| self.apply(w)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(k, w)| *w == FreeWord::basis(k))
    }

    /// Inverse automorphism, computed by Stallings folding of the petal graph
    /// of the images while tracking which petal each path came from. Fails
    /// when the images are not a free basis.
    pub fn inverse(&self) -> Result<FreeAut> {
        let rank = self.rank();
        let err = || Error::NotAutomorphism { rank };
        let mut g = FoldGraph::petals(&self.images);
        g.fold().map_err(|_| err())?;
        // An automorphism folds to a single vertex with one loop per letter.
        let mut inv: Vec<Option<FreeWord>> = vec![None; rank];
        for e in g.edges.iter().flatten() {
            if e.from != 0 || e.to != 0 || inv[e.label].is_some() {
                return Err(err());
            }
            inv[e.label] = Some(e.tag.clone());
        }
        let images: Option<Vec<FreeWord>> = inv.into_iter().collect();
        let result = FreeAut {
            images: images.ok_or_else(err)?,
        };
        if !self.compose(&result).is_identity() {
            return Err(err());
        }
        Ok(result)
    }
}

#[derive(Clone, Debug)]
struct FoldEdge {
    from: usize,
    to: usize,
    /// Basis letter read when traversing `from -> to`.
    label: usize,
    /// Word in the petal symbols read when traversing `from -> to`.
    tag: FreeWord,
}

struct FoldGraph {
    edges: Vec<Option<FoldEdge>>,
    vertex_count: usize,
}

impl FoldGraph {
    fn petals(words: &[FreeWord]) -> Self {
        let mut g = FoldGraph {
            edges: Vec::new(),
            vertex_count: 1,
        };
        for (p, w) in words.iter().enumerate() {
            let n = w.len();
            let mut prev = 0usize;
            for (k, &l) in w.letters().iter().enumerate() {
                let next = if k + 1 == n {
                    0
                } else {
                    g.vertex_count += 1;
                    g.vertex_count - 1
                };
                let tag = if k == 0 {
                    FreeWord::basis(p)
                } else {
                    FreeWord::new()
                };
                let label = (l.unsigned_abs() - 1) as usize;
                let edge = if l > 0 {
                    FoldEdge {
                        from: prev,
                        to: next,
                        label,
                        tag,
                    }
                } else {
                    FoldEdge {
                        from: next,
                        to: prev,
                        label,
                        tag: tag.inverse(),
                    }
                };
                g.edges.push(Some(edge));
                prev = next;
            }
        }
        g
    }

    /// Finds two distinct edge-ends at one vertex reading the same signed
    /// letter. Returns `(edge_a, edge_b, forward)` where `forward` says both
    /// leave through their `from` end.
    fn find_fold(&self) -> Option<(usize, usize, bool)> {
        use std::collections::HashMap;
        let mut seen: HashMap<(usize, usize, bool), usize> = HashMap::new();
        for (idx, e) in self.edges.iter().enumerate() {
            let Some(e) = e else { continue };
            for (vertex, forward) in [(e.from, true), (e.to, false)] {
                if let Some(&other) = seen.get(&(vertex, e.label, forward)) {
                    if other != idx {
                        return Some((other, idx, forward));
                    }
                } else {
                    seen.insert((vertex, e.label, forward), idx);
                }
            }
        }
        None
    }

    /// Reads edge `idx` from its shared end: returns (far vertex, tag read).
    fn read(&self, idx: usize, forward: bool) -> (usize, FreeWord) {
        let e = self.edges[idx].as_ref().unwrap();
        if forward {
            (e.to, e.tag.clone())
        } else {
            (e.from, e.tag.inverse())
        }
    }

    /// Re-gauges vertex `v` by `g`: tags leaving `v` are multiplied by `g` on
    /// the left, tags entering by `g^-1` on the right.
    fn gauge(&mut self, v: usize, g: &FreeWord) {
        let ginv = g.inverse();
        for e in self.edges.iter_mut().flatten() {
            if e.from == v {
                e.tag = g.concat(&e.tag);
            }
            if e.to == v {
                e.tag = e.tag.concat(&ginv);
            }
        }
    }

    fn fold(&mut self) -> std::result::Result<(), ()> {
        while let Some((a, b, forward)) = self.find_fold() {
            let (va, ta) = self.read(a, forward);
            let (vb, tb) = self.read(b, forward);
            if va == vb {
                // Parallel edges: an injective map forces equal tags.
                if ta != tb {
                    return Err(());
                }
                self.edges[b] = None;
                continue;
            }
            let (keep, drop, t_keep, t_drop) = if vb != 0 {
                (va, vb, ta, tb)
            } else {
                (vb, va, tb, ta)
            };
            let drop_edge = if vb != 0 { b } else { a };
            // After gauging `drop` by t_keep^-1 t_drop both edges carry t_keep.
            let mut g = t_keep.inverse();
            g.push_word(&t_drop);
            self.gauge(drop, &g);
            self.edges[drop_edge] = None;
            for e in self.edges.iter_mut().flatten() {
                if e.from == drop {
                    e.from = keep;
                }
                if e.to == drop {
                    e.to = keep;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fw(v: &[i32]) -> FreeWord {
        FreeWord::from_letters(v.iter().copied())
    }

    #[test]
    fn reduction() {
        assert!(fw(&[1, 2, -2, -1]).is_empty());
        assert_eq!(fw(&[1, 2, -2, 3]).letters(), &[1, 3]);
    }

    #[test]
    fn inverse_of_nielsen_moves() {
        // x0 -> x0 x1, x1 -> x1
        let phi = FreeAut::from_images(vec![fw(&[1, 2]), fw(&[2])]);
        let inv = phi.inverse().unwrap();
        assert_eq!(inv.images(), &[fw(&[1, -2]), fw(&[2])]);
        // conjugation by x0 x1
        let c = FreeAut::from_images(vec![
            fw(&[1, 2, 1, -2, -1]),
            fw(&[1, 2, 2, -2, -1]),
            fw(&[1, 2, 3, -2, -1]),
        ]);
        let ci = c.inverse().unwrap();
        assert!(c.compose(&ci).is_identity());
        assert!(ci.compose(&c).is_identity());
    }

    #[test]
    fn inverse_of_pure_braid_automorphism() {
        // Artin action of sigma_1^2 on F_3.
        let a = FreeAut::from_images(vec![fw(&[1, 2, 1, -2, -1]), fw(&[1, 2, -1]), fw(&[3])]);
        let ai = a.inverse().unwrap();
        assert!(ai.compose(&a).is_identity());
    }

    #[test]
    fn non_automorphisms_are_rejected() {
        assert!(FreeAut::from_images(vec![fw(&[1, 1]), fw(&[2])])
            .inverse()
            .is_err());
        assert!(FreeAut::from_images(vec![fw(&[1]), fw(&[1])])
            .inverse()
            .is_err());
        assert!(FreeAut::from_images(vec![fw(&[1, 2]), fw(&[2, 1])])
            .inverse()
            .is_err());
    }

    #[test]
    fn abelianize_counts_signed_letters() {
        assert_eq!(fw(&[1, 2, -1, 3, 3]).abelianize(3), vec![0, 1, 2]);
    }
}
