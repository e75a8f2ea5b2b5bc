//! Unipotent upper-triangular matrices over Z/m, their punctured quotients
//! (corner entry deleted), representations of finite quotients into them,
//! and the kernel-intersection enumeration.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::free_group::GroupWord;
use crate::group::{FiniteGroup, GroupTable};
use crate::magnus::magnus;
use crate::quotient::Quotient;
use crate::word::Word;

/// Default cap on the number of generator-image tuples enumerated.
pub const DEFAULT_TUPLE_BUDGET: usize = 1 << 21;

/// Largest matrix group tabulated for enumeration.
pub const MATRIX_TABLE_LIMIT: usize = 1 << 12;

/// Row-major position of `(i, j)`, `0 <= i < j < n`, among the strictly
/// upper entries.
#[inline]
fn tri_index(n: usize, i: usize, j: usize) -> usize {
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn check_modulus(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("modulus {m} must be at least 2")));
    }
    Ok(())
}

/// Group elements with the operations representations need.
pub trait MatrixElement: Clone + PartialEq + Eq + std::hash::Hash + Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn modulus(&self) -> u32;
    fn identity_like(&self) -> Self;
    fn is_identity(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    /// Smallest `m` with `S_m` in the kernel of every homomorphism from
    /// the free group into this matrix group.
    fn killed_level(&self) -> usize;
}

/// An element of `U_n(Z/m)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnipotentMatrix {
    n: usize,
    m: u32,
    entries: Vec<u32>,
}

impl UnipotentMatrix {
    pub fn identity(n: usize, m: u32) -> Result<Self> {
        check_modulus(m)?;
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        Ok(UnipotentMatrix {
            n,
            m,
            entries: vec![0; n * (n - 1) / 2],
        })
    }

    /// Builds from a closure on 0-based `(i, j)` with `i < j`.
    pub fn from_fn(n: usize, m: u32, mut f: impl FnMut(usize, usize) -> i64) -> Result<Self> {
        let mut x = Self::identity(n, m)?;
        for i in 0..n {
            for j in i + 1..n {
                x.entries[tri_index(n, i, j)] = f(i, j).rem_euclid(m as i64) as u32;
            }
        }
        Ok(x)
    }

    /// `I + c E_{ij}` (0-based).
    pub fn elementary(n: usize, m: u32, i: usize, j: usize, c: i64) -> Result<Self> {
        if i >= j || j >= n {
            return Err(Error::InvalidParameter(format!("({i},{j}) is not strictly upper in dimension {n}")));
        }
        Self::from_fn(n, m, |a, b| if (a, b) == (i, j) { c } else { 0 })
    }

    /// Order `m^{n(n-1)/2}`.
    pub fn group_order(n: usize, m: u32) -> Option<usize> {
        (m as usize).checked_pow((n * n.saturating_sub(1) / 2) as u32)
    }

    /// The element with the given index in row-major entry order (first
    /// entry most significant).
    pub fn from_index(n: usize, m: u32, mut idx: usize) -> Result<Self> {
        let mut x = Self::identity(n, m)?;
        for e in x.entries.iter_mut().rev() {
            *e = (idx % m as usize) as u32;
            idx /= m as usize;
        }
        Ok(x)
    }

    pub fn index(&self) -> usize {
        self.entries.iter().fold(0, |acc, &e| acc * self.m as usize + e as usize)
    }

    /// All of `U_n(Z/m)` in index order.
    pub fn enumerate(n: usize, m: u32) -> Result<Vec<Self>> {
        let total = Self::group_order(n, m)
            .ok_or_else(|| Error::InvalidParameter("group order overflows".into()))?;
        (0..total).map(|i| Self::from_index(n, m, i)).collect()
    }

    /// Entry `(i, j)`, 0-based, including the diagonal and lower part.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Greater => 0,
            std::cmp::Ordering::Less => self.entries[tri_index(self.n, i, j)],
        }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.m != other.m {
            return Err(Error::ParameterMismatch(format!(
                "U_{}(Z/{}) vs U_{}(Z/{})",
                self.n, self.m, other.n, other.m
            )));
        }
        Ok(MatrixElement::mul(self, other))
    }

    pub fn inverse(&self) -> Self {
        let (n, m) = (self.n, self.m as u64);
        let mut y = self.clone();
        for d in 1..n {
            for i in 0..n - d {
                let j = i + d;
                let mut s = self.entries[tri_index(n, i, j)] as u64;
                for k in i + 1..j {
                    s += self.get(i, k) as u64 * y.entries[tri_index(n, k, j)] as u64;
                }
                y.entries[tri_index(n, i, j)] = ((m - s % m) % m) as u32;
            }
        }
        y
    }

    /// The forgetful map to `Ū_n`, dropping the corner `(1, n)`.
    pub fn forget_corner(&self) -> PuncturedUnipotent {
        let corner = tri_index(self.n, 0, self.n - 1);
        PuncturedUnipotent {
            n: self.n,
            m: self.m,
            entries: self
                .entries
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != corner)
                .map(|(_, &e)| e)
                .collect(),
        }
    }

    pub fn corner(&self) -> u32 {
        self.get(0, self.n - 1)
    }

    /// Lifts a punctured element by filling in the corner.
    pub fn lift(x: &PuncturedUnipotent, corner: u32) -> Self {
        let n = x.n;
        let mut entries = x.entries.clone();
        if n >= 2 {
            entries.insert(tri_index(n, 0, n - 1), corner % x.m);
        }
        UnipotentMatrix { n, m: x.m, entries }
    }
}

impl MatrixElement for UnipotentMatrix {
    fn dim(&self) -> usize {
        self.n
    }
    fn modulus(&self) -> u32 {
        self.m
    }
    fn identity_like(&self) -> Self {
        UnipotentMatrix {
            n: self.n,
            m: self.m,
            entries: vec![0; self.entries.len()],
        }
    }
    fn is_identity(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }
    fn mul(&self, other: &Self) -> Self {
        let (n, m) = (self.n, self.m as u64);
        let mut out = vec![0u32; self.entries.len()];
        for i in 0..n {
            for j in i + 1..n {
                let t = tri_index(n, i, j);
                let mut s = self.entries[t] as u64 + other.entries[t] as u64;
                for k in i + 1..j {
                    s += self.entries[tri_index(n, i, k)] as u64 * other.entries[tri_index(n, k, j)] as u64;
                }
                out[t] = (s % m) as u32;
            }
        }
        UnipotentMatrix { n, m: self.m, entries: out }
    }
    fn killed_level(&self) -> usize {
        self.n
    }
}

/// An element of `Ū_n(Z/m)`: a unipotent matrix with the corner `(1, n)`
/// deleted. Products never read the corner, so this is a group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PuncturedUnipotent {
    n: usize,
    m: u32,
    entries: Vec<u32>,
}

impl PuncturedUnipotent {
    pub fn identity(n: usize, m: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("punctured dimension must be at least 2".into()));
        }
        Ok(UnipotentMatrix::identity(n, m)?.forget_corner())
    }

    /// Builds from a closure on 0-based `(i, j)`; the corner is not queried.
    pub fn from_fn(n: usize, m: u32, mut f: impl FnMut(usize, usize) -> i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("punctured dimension must be at least 2".into()));
        }
        Ok(UnipotentMatrix::from_fn(n, m, |i, j| if (i, j) == (0, n - 1) { 0 } else { f(i, j) })?.forget_corner())
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        let t = tri_index(self.n, i, j);
        t - usize::from(t > self.n - 2)
    }

    /// Entry `(i, j)`, 0-based; `None` for the deleted corner.
    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        if (i, j) == (0, self.n - 1) {
            return None;
        }
        Some(match i.cmp(&j) {
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Greater => 0,
            std::cmp::Ordering::Less => self.entries[self.slot(i, j)],
        })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn inverse(&self) -> Self {
        UnipotentMatrix::lift(self, 0).inverse().forget_corner()
    }
}

impl MatrixElement for PuncturedUnipotent {
    fn dim(&self) -> usize {
        self.n
    }
    fn modulus(&self) -> u32 {
        self.m
    }
    fn identity_like(&self) -> Self {
        PuncturedUnipotent {
            n: self.n,
            m: self.m,
            entries: vec![0; self.entries.len()],
        }
    }
    fn is_identity(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }
    fn mul(&self, other: &Self) -> Self {
        let (n, m) = (self.n, self.m as u64);
        let mut out = vec![0u32; self.entries.len()];
        for i in 0..n {
            for j in i + 1..n {
                if (i, j) == (0, n - 1) {
                    continue;
                }
                let t = self.slot(i, j);
                let mut s = self.entries[t] as u64 + other.entries[t] as u64;
                for k in i + 1..j {
                    s += self.entries[self.slot(i, k)] as u64 * other.entries[self.slot(k, j)] as u64;
                }
                out[t] = (s % m) as u32;
            }
        }
        PuncturedUnipotent { n, m: self.m, entries: out }
    }
    fn killed_level(&self) -> usize {
        self.n - 1
    }
}

fn write_rows(f: &mut fmt::Formatter<'_>, n: usize, entry: impl Fn(usize, usize) -> Option<u32>) -> fmt::Result {
    write!(f, "[")?;
    for i in 0..n {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "[")?;
        for j in 0..n {
            if j > 0 {
                write!(f, ",")?;
            }
            match entry(i, j) {
                Some(v) => write!(f, "{v}")?,
                None => write!(f, "*")?,
            }
        }
        write!(f, "]")?;
    }
    write!(f, "]")
}

impl fmt::Display for UnipotentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rows(f, self.n, |i, j| Some(self.get(i, j)))
    }
}

impl fmt::Display for PuncturedUnipotent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rows(f, self.n, |i, j| self.get(i, j))
    }
}

impl fmt::Debug for UnipotentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U{self}")
    }
}

impl fmt::Debug for PuncturedUnipotent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ū{self}")
    }
}

impl Serialize for UnipotentMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for PuncturedUnipotent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `gamma_1(g)` for the word `w = (a_1..a_n)`: the `(n+1)`-dimensional
/// unipotent matrix with `(i, j)` entry `eps_{(a_i..a_{j-1})}(g)`.
pub fn gamma1(w: &Word, g: &GroupWord, m: u32) -> Result<UnipotentMatrix> {
    gamma(w, g, m, false)
}

/// `gamma_2(g)`: as [`gamma1`] with entry `(i, j)` scaled by `(-1)^{j-i}`.
pub fn gamma2(w: &Word, g: &GroupWord, m: u32) -> Result<UnipotentMatrix> {
    gamma(w, g, m, true)
}

fn gamma(w: &Word, g: &GroupWord, m: u32, signed: bool) -> Result<UnipotentMatrix> {
    let n = w.len();
    let k = w.min_alphabet().max(g.min_alphabet()).max(1);
    let s = magnus(g, m, k, n)?;
    UnipotentMatrix::from_fn(n + 1, m, |i, j| {
        let c = s.get(&w.subword(i, j)).expect("subword within bound") as i64;
        if signed && (j - i) % 2 == 1 {
            -c
        } else {
            c
        }
    })
}

/// A homomorphism from a finite group into a matrix group, tabulated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation<M> {
    pub values: Vec<M>,
}

impl<M: MatrixElement> Representation<M> {
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&e| self.values[e].is_identity()).collect()
    }

    /// Checks the homomorphism law on every pair.
    pub fn is_homomorphism_on<G: FiniteGroup + ?Sized>(&self, g: &G) -> bool {
        is_homomorphism(g, &self.values, |a, b| a.mul(b))
    }
}

/// Whether `values` is multiplicative on every pair of `g`.
pub fn is_homomorphism<G: FiniteGroup + ?Sized, T: PartialEq + Sync>(
    g: &G,
    values: &[T],
    mul: impl Fn(&T, &T) -> T + Sync,
) -> bool {
    let n = g.order();
    (0..n)
        .into_par_iter()
        .all(|a| (0..n).all(|b| values[g.mul(a, b)] == mul(&values[a], &values[b])))
}

/// Propagates generator images along the spanning tree. The result is a
/// homomorphism iff `phi(x g_i) = phi(x) phi(g_i)` for all `x` and `i`,
/// which is checked here.
pub fn propagate_images<G: FiniteGroup + ?Sized, M: MatrixElement>(g: &G, images: &[M]) -> Result<Vec<M>> {
    if images.len() != g.generators().len() {
        return Err(Error::InvalidParameter(format!(
            "{} images for {} generators",
            images.len(),
            g.generators().len()
        )));
    }
    let id = images
        .first()
        .map(|x| x.identity_like())
        .ok_or_else(|| Error::InvalidParameter("no generators".into()))?;
    let values = g.tree().propagate(id.clone(), |v, _, i| v.mul(&images[i]));
    if !values[g.identity()].is_identity() {
        return Err(Error::NotAHomomorphism("identity not sent to identity".into()));
    }
    for x in 0..g.order() {
        for (i, img) in images.iter().enumerate() {
            if values[g.mul_gen(x, i)] != values[x].mul(img) {
                return Err(Error::NotAHomomorphism(format!(
                    "law fails at element {x}, generator {i}"
                )));
            }
        }
    }
    Ok(values)
}

/// The representation of `S/S_m` with the given images of the free
/// generators. Requires `m` at least the level the target group kills.
pub fn hom_from_images<M: MatrixElement>(q: &Quotient, images: &[M]) -> Result<Representation<M>> {
    if let Some(x) = images.first() {
        if q.bound() < x.killed_level() {
            return Err(Error::Precondition(format!(
                "S/S_{} does not factor maps into a group killing only S_{}",
                q.bound(),
                x.killed_level()
            )));
        }
    }
    Ok(Representation {
        values: propagate_images(q, images)?,
    })
}

/// Intersection of the kernels of all representations `Q -> U_n(F_p)`,
/// enumerated over generator-image tuples in index order. Stops early once
/// the intersection reaches `filtration_image(Q, n)`, its lower bound.
pub fn kernel_intersection(q: &Quotient, n: usize, tuple_budget: usize) -> Result<KernelIntersection> {
    let p = q.prime();
    if n < 2 {
        return Err(Error::InvalidParameter("matrix dimension must be at least 2".into()));
    }
    if q.bound() < n {
        return Err(Error::Precondition(format!(
            "S/S_{} does not factor representations into U_{n}",
            q.bound()
        )));
    }
    let size = UnipotentMatrix::group_order(n, p)
        .filter(|&s| s <= MATRIX_TABLE_LIMIT)
        .ok_or(Error::BudgetExceeded {
            what: "matrix group order",
            reached: usize::MAX,
            budget: MATRIX_TABLE_LIMIT,
        })?;
    let k = q.alphabet();
    let tuples = size.checked_pow(k as u32).filter(|&t| t <= tuple_budget).ok_or(Error::BudgetExceeded {
        what: "representation tuples",
        reached: size.saturating_pow(k as u32),
        budget: tuple_budget,
    })?;
    let group = UnipotentMatrix::enumerate(n, p)?;
    let table: Vec<u32> = (0..size * size)
        .map(|t| MatrixElement::mul(&group[t / size], &group[t % size]).index() as u32)
        .collect();
    let floor = q.filtration_image(n)?;
    let mut floor_mask = vec![false; q.order()];
    for &e in &floor {
        floor_mask[e] = true;
    }

    let tree = q.tree();
    let bfs = tree.bfs_order();
    let kernel_of = |t: usize| -> Vec<bool> {
        let mut imgs = vec![0usize; k];
        let mut r = t;
        for slot in imgs.iter_mut().rev() {
            *slot = r % size;
            r /= size;
        }
        let mut val = vec![0u32; q.order()];
        let mut ker = vec![false; q.order()];
        ker[bfs[0]] = true;
        for &e in &bfs[1..] {
            let (par, a) = tree.parent(e).expect("non-root");
            let v = table[val[par] as usize * size + imgs[a]];
            val[e] = v;
            ker[e] = v == 0;
        }
        ker
    };

    let mut running = vec![true; q.order()];
    let mut examined = 0usize;
    let batch = 64usize;
    let mut start = 0usize;
    while start < tuples {
        if running == floor_mask {
            break;
        }
        let end = (start + batch).min(tuples);
        let combined = (start..end)
            .into_par_iter()
            .map(kernel_of)
            .reduce(
                || vec![true; q.order()],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x &= y);
                    a
                },
            );
        running.iter_mut().zip(combined).for_each(|(x, y)| *x &= y);
        examined = end;
        start = end;
    }
    let elements = crate::group::indices(&running);
    Ok(KernelIntersection {
        elements,
        representations_examined: examined,
        total_representations: tuples,
        filtration_order: floor.len(),
    })
}

/// Outcome of [`kernel_intersection`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelIntersection {
    pub elements: Vec<usize>,
    pub representations_examined: usize,
    pub total_representations: usize,
    pub filtration_order: usize,
}

/// The fiber product `U_{n+1} x_{Ū_{n+1}} G` for a homomorphism
/// `gamma_bar: G -> Ū_{n+1}`. Element `(u, g)` has index `g * m + corner(u)`.
pub fn fiber_product<G: FiniteGroup + ?Sized>(g: &G, gamma_bar: &[PuncturedUnipotent]) -> Result<GroupTable> {
    if gamma_bar.len() != g.order() {
        return Err(Error::InvalidParameter("one matrix per group element required".into()));
    }
    if !is_homomorphism(g, gamma_bar, |a, b| a.mul(b)) {
        return Err(Error::NotAHomomorphism("fiber product needs a homomorphism".into()));
    }
    let m = gamma_bar[0].modulus() as usize;
    let order = g.order() * m;
    let mut gens: Vec<usize> = g.generators().iter().map(|&s| s * m).collect();
    gens.push(g.identity() * m + 1);
    GroupTable::from_fn(order, gens, |x, y| {
        let (gx, rx) = (x / m, (x % m) as u32);
        let (gy, ry) = (y / m, (y % m) as u32);
        let u = UnipotentMatrix::lift(&gamma_bar[gx], rx);
        let v = UnipotentMatrix::lift(&gamma_bar[gy], ry);
        let w = MatrixElement::mul(&u, &v);
        g.mul(gx, gy) * m + w.corner() as usize
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_u(rng: &mut impl Rng, n: usize, m: u32) -> UnipotentMatrix {
        UnipotentMatrix::from_fn(n, m, |_, _| rng.gen_range(0..m as i64)).unwrap()
    }

    #[test]
    fn indexing_layout() {
        assert_eq!(tri_index(4, 0, 1), 0);
        assert_eq!(tri_index(4, 0, 3), 2);
        assert_eq!(tri_index(4, 1, 2), 3);
        assert_eq!(tri_index(4, 2, 3), 5);
        let x = UnipotentMatrix::from_index(3, 2, 0b100).unwrap();
        assert_eq!(x.get(0, 1), 1);
        assert_eq!(x.index(), 4);
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(UnipotentMatrix::enumerate(3, 2).unwrap().len(), 8);
        assert_eq!(UnipotentMatrix::enumerate(3, 3).unwrap().len(), 27);
        assert_eq!(UnipotentMatrix::enumerate(4, 2).unwrap().len(), 64);
    }

    #[test]
    fn group_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [2, 3, 4, 5] {
            for n in 1..6 {
                let id = UnipotentMatrix::identity(n, m).unwrap();
                for _ in 0..50 {
                    let x = random_u(&mut rng, n, m);
                    let y = random_u(&mut rng, n, m);
                    let z = random_u(&mut rng, n, m);
                    assert_eq!(id.mul(&x), x);
                    assert!(x.mul(&x.inverse()).is_identity());
                    assert!(x.inverse().mul(&x).is_identity());
                    assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
                }
            }
        }
        let a = UnipotentMatrix::identity(3, 2).unwrap();
        let b = UnipotentMatrix::identity(4, 2).unwrap();
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn forgetful_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for m in [2, 3] {
            for n in 2..6 {
                assert!(UnipotentMatrix::identity(n, m).unwrap().forget_corner().is_identity());
                for _ in 0..50 {
                    let x = random_u(&mut rng, n, m);
                    let y = random_u(&mut rng, n, m);
                    assert_eq!(x.mul(&y).forget_corner(), x.forget_corner().mul(&y.forget_corner()));
                    assert_eq!(UnipotentMatrix::lift(&x.forget_corner(), x.corner()), x);
                    let xb = x.forget_corner();
                    assert!(xb.mul(&xb.inverse()).is_identity());
                }
            }
        }
        // each fibre has m elements and the kernel is central
        let all = UnipotentMatrix::enumerate(3, 3).unwrap();
        let target = all[5].forget_corner();
        assert_eq!(all.iter().filter(|x| x.forget_corner() == target).count(), 3);
        let z = UnipotentMatrix::elementary(3, 3, 0, 2, 1).unwrap();
        assert!(z.forget_corner().is_identity());
        assert!(all.iter().all(|x| x.mul(&z) == z.mul(x)));
    }

    #[test]
    fn display_marks_the_corner() {
        let x = UnipotentMatrix::elementary(3, 2, 0, 1, 1).unwrap();
        assert_eq!(x.to_string(), "[[1,1,0],[0,1,0],[0,0,1]]");
        assert_eq!(x.forget_corner().to_string(), "[[1,1,*],[0,1,0],[0,0,1]]");
    }

    #[test]
    fn gamma_values() {
        let w = Word::new(vec![0, 1]);
        let a = GroupWord::generator(0);
        for m in [2, 3, 5] {
            assert!(gamma1(&w, &GroupWord::identity(), m).unwrap().is_identity());
            let g = gamma1(&w, &a, m).unwrap();
            assert_eq!((g.get(0, 1), g.get(1, 2), g.get(0, 2)), (1, 0, 0));
            let c = a.commutator(&GroupWord::generator(1));
            assert_eq!(gamma1(&w, &c, m).unwrap().get(0, 2), 1);
            assert_eq!(gamma2(&w, &a, m).unwrap().get(0, 1), m - 1);
        }
    }

    #[test]
    fn gammas_are_homomorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let random_word = |rng: &mut ChaCha8Rng| {
            GroupWord::from_syllables((0..rng.gen_range(0..6)).map(|_| (rng.gen_range(0..2), rng.gen_range(-3..4))))
        };
        for m in [2, 3, 4] {
            for n in 1..=4 {
                let w = Word::new((0..n).map(|_| rng.gen_range(0..2)).collect());
                for _ in 0..10 {
                    let g = random_word(&mut rng);
                    let h = random_word(&mut rng);
                    let gh = g.multiply(&h);
                    for f in [gamma1, gamma2] {
                        assert_eq!(f(&w, &gh, m).unwrap(), f(&w, &g, m).unwrap().mul(&f(&w, &h, m).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn representation_from_images() {
        let q = Quotient::build(2, 2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let imgs = vec![random_u(&mut rng, 3, 2), random_u(&mut rng, 3, 2)];
        let rep = hom_from_images(&q, &imgs).unwrap();
        assert!(rep.is_homomorphism_on(&q));
        let ker = rep.kernel();
        for e in q.filtration_image(3).unwrap() {
            assert!(ker.contains(&e));
        }
        let trivial = hom_from_images(&q, &[imgs[0].identity_like(), imgs[0].identity_like()]).unwrap();
        assert_eq!(trivial.kernel().len(), q.order());
        let q2 = Quotient::build(2, 2, 2).unwrap();
        assert!(matches!(hom_from_images(&q2, &imgs), Err(Error::Precondition(_))));
    }

    #[test]
    fn kernel_intersection_small_cases() {
        let q = Quotient::build(2, 2, 3).unwrap();
        let ki = kernel_intersection(&q, 2, DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(ki.elements, q.filtration_image(2).unwrap());
        let q = Quotient::build(2, 3, 3).unwrap();
        let ki = kernel_intersection(&q, 2, DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(ki.elements.len(), 3);
        assert!(matches!(
            kernel_intersection(&q, 3, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn fiber_product_orders() {
        let q = Quotient::build(2, 2, 2).unwrap();
        let triv = vec![PuncturedUnipotent::identity(3, 2).unwrap(); q.order()];
        let fp = fiber_product(&q, &triv).unwrap();
        assert_eq!(fp.order(), 8);
        assert!(crate::group::is_abelian(&fp));
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let imgs: Vec<PuncturedUnipotent> = (0..2)
            .map(|_| PuncturedUnipotent::from_fn(3, 2, |_, _| rng.gen_range(0..2)).unwrap())
            .collect();
        let rep = hom_from_images(&q, &imgs).unwrap();
        let fp = fiber_product(&q, &rep.values).unwrap();
        assert_eq!(fp.order(), 2 * q.order());
        let mut bad = rep.values.clone();
        bad[1] = PuncturedUnipotent::from_fn(3, 2, |_, _| 1).unwrap();
        bad[2] = bad[0].clone();
        assert!(fiber_product(&q, &bad).is_err());
    }
}
