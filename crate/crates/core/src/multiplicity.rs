//! Triangulated multiple-point spaces `W^k(f)` and `D^k(f)`.
//!
//! A vertex of either space is a `k`-tuple of source vertices over a common
//! target vertex. Every simplex is a face of a *product simplex*
//! `(Δ_1 × … × Δ_k)/Y`: for a target simplex `Δ = [w_0 < … < w_n]` and ordered
//! lifts `Δ_ℓ = (v^ℓ_0, …, v^ℓ_n)` with `f(v^ℓ_j) = w_j`, vertex `j` of the
//! product is the tuple `(v^1_j, …, v^k_j)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use crate::complex::{sorting_sign, Chain, Simplex, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    W,
    D,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::W => write!(f, "W"),
            Kind::D => write!(f, "D"),
        }
    }
}

/// Ordered lifts of every target simplex, each a list of source vertices in
/// the target's vertex order. Lifts of one simplex are sorted, so a lift's
/// position in the list is a stable index.
#[derive(Clone, Debug)]
pub struct LiftTable {
    lifts: HashMap<Simplex, Vec<Vec<usize>>>,
}

impl LiftTable {
    pub fn new(f: &SimplicialMap) -> Self {
        let mut lifts: HashMap<Simplex, Vec<Vec<usize>>> = HashMap::new();
        for s in f.source().all_simplices() {
            let Some((image, _)) = f.image_simplex(s) else { continue };
            let mut ordered = s.vertices().to_vec();
            ordered.sort_by_key(|&v| f.apply(v));
            lifts.entry(image).or_default().push(ordered);
        }
        for list in lifts.values_mut() {
            list.sort();
        }
        Self { lifts }
    }

    pub fn lifts(&self, base: &Simplex) -> &[Vec<usize>] {
        self.lifts.get(base).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, base: &Simplex) -> usize {
        self.lifts(base).len()
    }

    /// Position of an ordered lift of `base`.
    pub fn position(&self, base: &Simplex, lift: &[usize]) -> Option<usize> {
        self.lifts(base).binary_search_by(|l| l.as_slice().cmp(lift)).ok()
    }

    /// Largest number of lifts of any target simplex.
    pub fn max_lifts(&self) -> usize {
        self.lifts.values().map(Vec::len).max().unwrap_or(0)
    }
}

/// Every ordered lift of the target simplex `delta`, in sorted order.
pub fn ordered_lifts(f: &SimplicialMap, delta: &Simplex) -> Vec<Vec<usize>> {
    LiftTable::new(f).lifts(delta).to_vec()
}

/// Largest `k` for which `D^k(f)` is nonempty.
pub fn k_max(f: &SimplicialMap) -> usize {
    LiftTable::new(f).max_lifts()
}

/// A product simplex: a target simplex and the positions of `k` of its lifts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProductSimplex {
    pub base: Simplex,
    pub lifts: Vec<usize>,
}

/// `W^k(f)` or `D^k(f)` as a simplicial complex whose vertices are tuples.
#[derive(Clone, Debug)]
pub struct MultiplePointComplex {
    kind: Kind,
    k: usize,
    f: Arc<SimplicialMap>,
    lifts: Arc<LiftTable>,
    tuples: Vec<Vec<usize>>,
    tuple_index: HashMap<Vec<usize>, usize>,
    complex: Arc<SimplicialComplex>,
    products: Vec<ProductSimplex>,
}

/// `W^k(f)`: all product simplices, over every target simplex. `W^1 = X`.
#[allow(non_snake_case)]
pub fn build_W(f: &Arc<SimplicialMap>, k: usize) -> Result<MultiplePointComplex> {
    MultiplePointComplex::build(f, Kind::W, k, Arc::new(LiftTable::new(f)))
}

/// `D^k(f)`: faces of products of pairwise distinct lifts. `D^1 = X`.
#[allow(non_snake_case)]
pub fn build_D(f: &Arc<SimplicialMap>, k: usize) -> Result<MultiplePointComplex> {
    MultiplePointComplex::build(f, Kind::D, k, Arc::new(LiftTable::new(f)))
}

impl MultiplePointComplex {
    pub fn build(f: &Arc<SimplicialMap>, kind: Kind, k: usize, lifts: Arc<LiftTable>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidMultiplicity(k));
        }
        let y = f.target();
        let mut products = Vec::new();
        for base in y.all_simplices() {
            let n = lifts.count(base);
            for choice in (0..k).map(|_| 0..n).multi_cartesian_product() {
                if kind == Kind::D && !choice.iter().all_unique() {
                    continue;
                }
                products.push(ProductSimplex { base: base.clone(), lifts: choice });
            }
        }
        // Vertex tuples of every product (faces add no new vertices).
        let mut tuple_set: BTreeSet<Vec<usize>> = BTreeSet::new();
        for p in &products {
            let ls = lifts.lifts(&p.base);
            for j in 0..=p.base.dim() {
                tuple_set.insert(p.lifts.iter().map(|&l| ls[l][j]).collect());
            }
        }
        let tuples: Vec<Vec<usize>> = tuple_set.into_iter().collect();
        let tuple_index: HashMap<Vec<usize>, usize> =
            tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();

        let complex = if k == 1 {
            Arc::clone(f.source())
        } else {
            let x = f.source();
            let labels =
                tuples.iter().map(|t| format!("({})", t.iter().map(|&v| x.label(v)).join(","))).collect();
            let mut all: BTreeSet<Simplex> = BTreeSet::new();
            for p in &products {
                let ls = lifts.lifts(&p.base);
                let ids: Vec<usize> = (0..=p.base.dim())
                    .map(|j| tuple_index[&p.lifts.iter().map(|&l| ls[l][j]).collect::<Vec<_>>()])
                    .collect();
                let s = Simplex::new(ids).expect("product vertices are distinct");
                if kind == Kind::D {
                    all.extend(s.all_faces());
                } else {
                    all.insert(s);
                }
            }
            Arc::new(SimplicialComplex::from_closed_set(labels, all))
        };
        Ok(Self { kind, k, f: Arc::clone(f), lifts, tuples, tuple_index, complex, products })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn map(&self) -> &Arc<SimplicialMap> {
        &self.f
    }

    pub fn lift_table(&self) -> &Arc<LiftTable> {
        &self.lifts
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    /// The generating product simplices (all of them for `W`, those with
    /// pairwise distinct lifts for `D`).
    pub fn products(&self) -> &[ProductSimplex] {
        &self.products
    }

    pub fn tuple(&self, v: usize) -> &[usize] {
        &self.tuples[v]
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn vertex_of(&self, tuple: &[usize]) -> Option<usize> {
        self.tuple_index.get(tuple).copied()
    }

    /// Vertex ids of the product simplex in the target's vertex order, or
    /// `None` if it is not a simplex of this complex.
    pub fn product_vertices(&self, base: &Simplex, lift_ids: &[usize]) -> Option<Vec<usize>> {
        let ls = self.lifts.lifts(base);
        if lift_ids.len() != self.k || lift_ids.iter().any(|&l| l >= ls.len()) {
            return None;
        }
        let ids: Option<Vec<usize>> = (0..=base.dim())
            .map(|j| self.vertex_of(&lift_ids.iter().map(|&l| ls[l][j]).collect::<Vec<_>>()))
            .collect();
        let ids = ids?;
        let (s, _) = Simplex::oriented(&ids).ok()?;
        self.complex.contains(&s).then_some(ids)
    }

    /// Canonical simplex and the sign of the product (target-ordered) orientation.
    pub fn product_simplex(&self, base: &Simplex, lift_ids: &[usize]) -> Option<(Simplex, i64)> {
        let ids = self.product_vertices(base, lift_ids)?;
        Simplex::oriented(&ids).ok()
    }

    /// The chain `coeff · (Δ_{l_1} × … × Δ_{l_k})/Y` with product orientation.
    pub fn product_chain(&self, base: &Simplex, lift_ids: &[usize], coeff: i64) -> Option<Chain> {
        let (s, sign) = self.product_simplex(base, lift_ids)?;
        Some(Chain::from_simplex(s, sign * coeff))
    }

    /// Writes a simplex of this complex as a product: its image simplex, the
    /// lift position in every slot, and the sign relating the canonical
    /// orientation to the product orientation.
    pub fn decompose(&self, s: &Simplex) -> (ProductSimplex, i64) {
        let f = &self.f;
        let mut ordered = s.vertices().to_vec();
        ordered.sort_by_key(|&v| f.apply(self.tuples[v][0]));
        let base = Simplex::from_sorted(ordered.iter().map(|&v| f.apply(self.tuples[v][0])).collect());
        let lift_ids = (0..self.k)
            .map(|slot| {
                let lift: Vec<usize> = ordered.iter().map(|&v| self.tuples[v][slot]).collect();
                self.lifts.position(&base, &lift).expect("every slot is a lift")
            })
            .collect();
        (ProductSimplex { base, lifts: lift_ids }, sorting_sign(&ordered))
    }

    /// `f^(k)`: the image simplex of `s` and the orientation sign.
    pub fn image_simplex(&self, s: &Simplex) -> (Simplex, i64) {
        let image: Vec<usize> = s.vertices().iter().map(|&v| self.f.apply(self.tuples[v][0])).collect();
        Simplex::oriented(&image).expect("multiple-point simplices map isomorphically")
    }

    /// Image of a simplex under the slot permutation `σ`, with orientation sign.
    pub fn act_on_simplex(&self, sigma: &SkElement, s: &Simplex) -> Option<(Simplex, i64)> {
        let ids: Option<Vec<usize>> =
            s.vertices().iter().map(|&v| self.vertex_of(&sigma.permute_tuple(&self.tuples[v]))).collect();
        let (t, sign) = Simplex::oriented(&ids?).ok()?;
        self.complex.contains(&t).then_some((t, sign))
    }
}

/// `f^(k): Z^k → Y`, `(x_1, …, x_k) ↦ f(x_1)`. Panics if some slot disagrees,
/// which would mean the complex was built wrongly.
pub fn fk_map(z: &MultiplePointComplex) -> SimplicialMap {
    let f = z.map();
    let vertex_map = z
        .tuples
        .iter()
        .map(|t| {
            let w = f.apply(t[0]);
            assert!(t.iter().all(|&v| f.apply(v) == w), "tuple {t:?} is not over a single vertex");
            w
        })
        .collect();
    SimplicialMap::new(Arc::clone(z.complex()), Arc::clone(f.target()), vertex_map).expect("f^(k) is simplicial")
}

/// `ε^{i,k}: Z^k → Z^{k−1}` (1-based `i`), dropping slot `i`, into an explicitly
/// given target. For `k = 1` this is `f` itself and `target` is ignored.
pub fn projection_eps_into(z: &MultiplePointComplex, i: usize, target: &MultiplePointComplex) -> Result<SimplicialMap> {
    if i == 0 || i > z.k {
        return Err(Error::InvalidIndex { index: i, k: z.k });
    }
    if z.k == 1 {
        return Ok((**z.map()).clone());
    }
    if target.k + 1 != z.k {
        return Err(Error::InvalidMultiplicity(target.k));
    }
    let vertex_map: Option<Vec<usize>> = z
        .tuples
        .iter()
        .map(|t| {
            let mut dropped = t.clone();
            dropped.remove(i - 1);
            target.vertex_of(&dropped)
        })
        .collect();
    let vertex_map = vertex_map.ok_or_else(|| Error::InvalidMap("projection leaves the target complex".into()))?;
    SimplicialMap::new(Arc::clone(z.complex()), Arc::clone(target.complex()), vertex_map)
}

/// `ε^{i,k}` into a freshly built complex of the same kind at multiplicity `k − 1`.
pub fn projection_eps(z: &MultiplePointComplex, i: usize) -> Result<SimplicialMap> {
    if i == 0 || i > z.k {
        return Err(Error::InvalidIndex { index: i, k: z.k });
    }
    if z.k == 1 {
        return Ok((**z.map()).clone());
    }
    let target = MultiplePointComplex::build(z.map(), z.kind, z.k - 1, Arc::clone(&z.lifts))?;
    projection_eps_into(z, i, &target)
}

/// An element of the symmetric group `S_k` acting on tuple slots by
/// `(σ·x)_{σ(ℓ)} = x_ℓ`. Slots are 0-based here.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SkElement {
    perm: Vec<usize>,
    sign: i64,
}

impl SkElement {
    /// `perm[ℓ] = σ(ℓ)`; must be a permutation of `0..k`.
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidMap(format!("{perm:?} is not a permutation")));
            }
        }
        let sign = sorting_sign(&perm);
        Ok(Self { perm, sign })
    }

    pub fn identity(k: usize) -> Self {
        Self { perm: (0..k).collect(), sign: 1 }
    }

    /// The transposition of slots `a` and `b` (0-based).
    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut perm: Vec<usize> = (0..k).collect();
        perm.swap(a, b);
        Self::new(perm).expect("transposition is a permutation")
    }

    /// The `k − 1` adjacent transpositions, which generate `S_k`.
    pub fn adjacent_transpositions(k: usize) -> Vec<Self> {
        (1..k).map(|i| Self::transposition(k, i - 1, i)).collect()
    }

    /// All of `S_k`, in lexicographic order of `perm`.
    pub fn all(k: usize) -> Vec<Self> {
        (0..k).permutations(k).map(|p| Self::new(p).expect("permutation")).collect()
    }

    pub fn k(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn sign(&self) -> i64 {
        self.sign
    }

    pub fn apply(&self, slot: usize) -> usize {
        self.perm[slot]
    }

    /// `σ ∘ τ`.
    pub fn compose(&self, tau: &SkElement) -> SkElement {
        assert_eq!(self.k(), tau.k());
        Self { perm: tau.perm.iter().map(|&t| self.perm[t]).collect(), sign: self.sign * tau.sign }
    }

    pub fn inverse(&self) -> SkElement {
        let mut inv = vec![0; self.k()];
        for (l, &p) in self.perm.iter().enumerate() {
            inv[p] = l;
        }
        Self { perm: inv, sign: self.sign }
    }

    pub fn permute_tuple<T: Clone>(&self, x: &[T]) -> Vec<T> {
        let mut out = x.to_vec();
        for (l, v) in x.iter().enumerate() {
            out[self.perm[l]] = v.clone();
        }
        out
    }

    /// `σ̄^j ∈ S_{k+1}` for `σ ∈ S_k`: fixes slot `j` (1-based) and acts as `σ`
    /// on the remaining slots, so that `σ ∘ ε^{j} = ε^{j} ∘ σ̄^j`.
    pub fn bar(&self, j: usize) -> SkElement {
        let k = self.k();
        assert!((1..=k + 1).contains(&j), "slot {j} out of range");
        let j = j - 1;
        let d = |i: usize| if i < j { i } else { i + 1 };
        let perm = (0..=k)
            .map(|i| match i.cmp(&j) {
                std::cmp::Ordering::Less => d(self.perm[i]),
                std::cmp::Ordering::Equal => j,
                std::cmp::Ordering::Greater => d(self.perm[i - 1]),
            })
            .collect();
        Self::new(perm).expect("σ̄ is a permutation")
    }
}

/// `σ_#(c)` on a chain of a multiplicity-`k` complex.
pub fn sk_act(sigma: &SkElement, z: &MultiplePointComplex, c: &Chain) -> Result<Chain> {
    if sigma.k() != z.k() {
        return Err(Error::InvalidMultiplicity(sigma.k()));
    }
    c.check_on(z.complex())?;
    let mut out = Chain::zero(c.degree());
    for (s, m) in c.terms() {
        let (t, sign) = z.act_on_simplex(sigma, s).expect("multiple-point complexes are S_k-invariant");
        out.add_term(t, sign * m);
    }
    Ok(out)
}

/// `Z^1, …, Z^{top}` with all projections `ε^{i,k}` precomputed.
#[derive(Clone, Debug)]
pub struct MultiplePointTower {
    kind: Kind,
    f: Arc<SimplicialMap>,
    levels: Vec<MultiplePointComplex>,
    eps: Vec<Vec<SimplicialMap>>,
}

impl MultiplePointTower {
    pub fn new(f: &Arc<SimplicialMap>, kind: Kind, top: usize) -> Result<Self> {
        let lifts = Arc::new(LiftTable::new(f));
        let mut levels: Vec<MultiplePointComplex> = Vec::with_capacity(top);
        let mut eps = Vec::with_capacity(top);
        for k in 1..=top {
            let z = MultiplePointComplex::build(f, kind, k, Arc::clone(&lifts))?;
            let maps = if k == 1 {
                vec![(**f).clone()]
            } else {
                let below = &levels[k - 2];
                (1..=k).map(|i| projection_eps_into(&z, i, below)).collect::<Result<Vec<_>>>()?
            };
            levels.push(z);
            eps.push(maps);
        }
        Ok(Self { kind, f: Arc::clone(f), levels, eps })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn map(&self) -> &Arc<SimplicialMap> {
        &self.f
    }

    pub fn top(&self) -> usize {
        self.levels.len()
    }

    /// `Z^k` for `1 ≤ k ≤ top`.
    pub fn level(&self, k: usize) -> &MultiplePointComplex {
        &self.levels[k - 1]
    }

    /// `ε^{i,k}` (1-based `i`); for `k = 1` this is `f`.
    pub fn eps(&self, k: usize, i: usize) -> &SimplicialMap {
        &self.eps[k - 1][i - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    // m = 0, z = 1, p = 2 over Y = edge 0–1.
    fn fold() -> Arc<SimplicialMap> {
        let x = Arc::new(build_complex(&[[0, 1], [1, 2]]).unwrap());
        let y = Arc::new(build_complex(&[[0, 1]]).unwrap());
        Arc::new(SimplicialMap::new(x, y, vec![1, 0, 1]).unwrap())
    }

    fn double_cover() -> Arc<SimplicialMap> {
        let x = Arc::new(SimplicialComplex::new(2, &[[0], [1]]).unwrap());
        let y = Arc::new(build_complex(&[[0]]).unwrap());
        Arc::new(SimplicialMap::new(x, y, vec![0, 0]).unwrap())
    }

    #[test]
    fn fold_lifts() {
        let f = fold();
        let edge = Simplex::new(vec![0, 1]).unwrap();
        assert_eq!(ordered_lifts(&f, &edge), vec![vec![1, 0], vec![1, 2]]);
        assert_eq!(k_max(&f), 2);
    }

    #[test]
    fn fold_w2_and_d2() {
        let f = fold();
        let w = build_W(&f, 2).unwrap();
        assert_eq!(w.complex().f_vector(), vec![5, 4]);
        let d = build_D(&f, 2).unwrap();
        assert_eq!(d.complex().f_vector(), vec![3, 2]);
        assert_eq!(d.tuples(), &[vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert!(build_D(&f, 3).unwrap().is_empty());
        assert_eq!(build_W(&f, 0).unwrap_err(), Error::InvalidMultiplicity(0));
    }

    #[test]
    fn double_cover_w2() {
        let f = double_cover();
        let w = build_W(&f, 2).unwrap();
        assert_eq!(w.complex().f_vector(), vec![4]);
        let d = build_D(&f, 2).unwrap();
        assert_eq!(d.tuples(), &[vec![0, 1], vec![1, 0]]);
        let e1 = projection_eps(&d, 1).unwrap();
        assert_eq!(e1.vertex_map(), &[1, 0]);
        assert_eq!(projection_eps(&d, 3).unwrap_err(), Error::InvalidIndex { index: 3, k: 2 });
    }

    #[test]
    fn swap_acts_on_fold_d2() {
        let f = fold();
        let d = build_D(&f, 2).unwrap();
        let swap = SkElement::transposition(2, 0, 1);
        // [(m,p),(z,z)] ↦ [(p,m),(z,z)]
        let c = Chain::oriented(&[0, 1], 1).unwrap();
        assert_eq!(sk_act(&swap, &d, &c).unwrap(), Chain::oriented(&[2, 1], 1).unwrap());
    }

    #[test]
    fn bar_relation() {
        let sigma = SkElement::new(vec![1, 2, 0]).unwrap();
        for j in 1..=4 {
            let b = sigma.bar(j);
            assert_eq!(b.sign(), sigma.sign());
            assert_eq!(b.apply(j - 1), j - 1);
            let x = vec![10, 20, 30, 40];
            let mut lhs = x.clone();
            lhs.remove(j - 1);
            let lhs = sigma.permute_tuple(&lhs);
            let mut rhs = b.permute_tuple(&x);
            rhs.remove(j - 1);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn decompose_inverts_product() {
        let f = fold();
        let w = build_W(&f, 2).unwrap();
        let edge = Simplex::new(vec![0, 1]).unwrap();
        for lifts in [[0, 1], [1, 0], [1, 1]] {
            let (s, sign) = w.product_simplex(&edge, &lifts).unwrap();
            let (p, sign2) = w.decompose(&s);
            assert_eq!(p.lifts, lifts.to_vec());
            assert_eq!(sign, sign2);
        }
    }
}
