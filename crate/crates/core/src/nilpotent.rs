//! Class-2 nilpotent quotients of surface groups.
//!
//! For odd `N`, `UC_g^N` is the free class-2 exponent-`N` group on
//! `a_1, b_1, ..., a_g, b_g` modulo the central line of `w = sum a_i ^ b_i`.
//! Elements are pairs `(v, w)` with `v` in `(Z/N)^2g` and `w` in the exterior
//! square, multiplied by `(v, w)(v', w') = (v + v', w + w' + v ^ v')`. The
//! line is quotiented by zeroing the `a_1 ^ b_1` coordinate, i.e. subtracting
//! that coordinate from every other `a_i ^ b_i`.
//!
//! For `N = 2` the quotient is instead a central extension glued along the
//! dual tree of a singular fiber, see [`TreeExtension`].

use serde::Serialize;

use crate::group::Group;
use crate::words::Word;
use crate::{Error, Result};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_modulus(n: u64) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::EvenModulus(n));
    }
    Ok(())
}

/// `N^2g * N^(C(2g,2) - 1)`.
pub fn uc_order(g: usize, n: u64) -> Result<u128> {
    check_modulus(n)?;
    if g == 0 {
        return Err(Error::InvalidArgument("genus must be positive".into()));
    }
    let dim = 2 * g + (2 * g) * (2 * g - 1) / 2 - 1;
    (n as u128)
        .checked_pow(dim as u32)
        .ok_or_else(|| Error::InvalidArgument(format!("order of UC_{g}^{n} overflows u128")))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct UCElement {
    pub g: usize,
    pub modulus: u64,
    pub v: Vec<u64>,
    /// Exterior coordinates indexed by pairs `p < q`; the `a_1 ^ b_1` slot is always 0.
    pub w: Vec<u64>,
}

impl UCElement {
    pub fn is_identity(&self) -> bool {
        self.v.iter().chain(&self.w).all(|&x| x == 0)
    }
}

/// The group `UC_g^N` for odd `N`.
#[derive(Clone, Debug)]
pub struct UCGroup {
    g: usize,
    modulus: u64,
    pairs: Vec<(usize, usize)>,
}

impl UCGroup {
    pub fn new(g: usize, modulus: u64) -> Result<Self> {
        uc_order(g, modulus)?;
        let d = 2 * g;
        let pairs = (0..d)
            .flat_map(|p| (p + 1..d).map(move |q| (p, q)))
            .collect();
        Ok(UCGroup { g, modulus, pairs })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u128 {
        uc_order(self.g, self.modulus).unwrap()
    }

    fn pair_index(&self, p: usize, q: usize) -> usize {
        let d = 2 * self.g;
        p * d - p * (p + 1) / 2 + (q - p - 1)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn identity_element(&self) -> UCElement {
        UCElement {
            g: self.g,
            modulus: self.modulus,
            v: vec![0; 2 * self.g],
            w: vec![0; self.pairs.len()],
        }
    }

    /// Image of the surface generator with index `i` (`a_k` is `2(k-1)`, `b_k` is `2(k-1)+1`).
    pub fn generator(&self, i: usize) -> UCElement {
        let mut e = self.identity_element();
        e.v[i] = 1;
        e
    }

    fn reduce(&self, w: &mut [u64]) {
        let n = self.modulus;
        let t = w[0];
        if t != 0 {
            for i in 1..self.g {
                let k = self.pair_index(2 * i, 2 * i + 1);
                w[k] = (w[k] + n - t) % n;
            }
            w[0] = 0;
        }
    }

    pub fn uc_from_word(&self, word: &Word) -> Result<UCElement> {
        if word.rank() != 2 * self.g {
            return Err(Error::RankMismatch {
                expected: 2 * self.g,
                found: word.rank(),
            });
        }
        let mut e = self.identity_element();
        for s in word.syllables() {
            let gen = self.generator(s.gen);
            let k = s.exp.rem_euclid(self.modulus as i64);
            for _ in 0..k {
                e = self.multiply(&e, &gen);
            }
        }
        Ok(e)
    }

    /// Exact order: `N / gcd(N, all coordinates)`, because `(v, w)^k = (kv, kw)`.
    pub fn uc_element_order(&self, e: &UCElement) -> u64 {
        let d =
            e.v.iter()
                .chain(&e.w)
                .fold(self.modulus, |acc, &x| gcd(acc, x));
        self.modulus / d
    }
}

impl Group for UCGroup {
    type Element = UCElement;

    fn identity(&self) -> UCElement {
        self.identity_element()
    }

    fn multiply(&self, x: &UCElement, y: &UCElement) -> UCElement {
        let n = self.modulus;
        let v = x.v.iter().zip(&y.v).map(|(a, b)| (a + b) % n).collect();
        let mut w: Vec<u64> = x.w.iter().zip(&y.w).map(|(a, b)| (a + b) % n).collect();
        for (k, &(p, q)) in self.pairs.iter().enumerate() {
            let wedge = (x.v[p] * y.v[q] + n * n - x.v[q] * y.v[p]) % n;
            w[k] = (w[k] + wedge) % n;
        }
        self.reduce(&mut w);
        UCElement {
            g: self.g,
            modulus: n,
            v,
            w,
        }
    }

    fn inverse(&self, x: &UCElement) -> UCElement {
        // (v, w)^-1 = (-v, -w) since v ^ v = 0
        let n = self.modulus;
        UCElement {
            g: self.g,
            modulus: n,
            v: x.v.iter().map(|&a| (n - a) % n).collect(),
            w: x.w.iter().map(|&a| (n - a) % n).collect(),
        }
    }
}

/// One component of a singular fiber for the `N = 2` construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeComponent {
    pub genus: usize,
    /// Homology classes (length `2 * genus`) of the non-separating vanishing cycles on this component.
    pub nz_cycles: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TreeElement {
    /// Concatenated `F_2` coordinates of all components.
    pub v: Vec<u8>,
    pub z: u8,
}

/// Product of central `Z/2`-extensions of `(Z/2)^2g_j`, one per component,
/// with all centres identified along the tree.
///
/// Component `j` uses the cocycle `b(v, v') = sum_i v_{a_i} v'_{b_i} + l(v) l(v')`,
/// whose commutator form is the intersection pairing mod 2. The linear form
/// `l` makes `(s, 0)` square to the identity for every supplied NZ-cycle `s`;
/// this is possible because the squaring map restricted to an isotropic span is linear.
#[derive(Clone, Debug)]
pub struct TreeExtension {
    components: Vec<TreeComponent>,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    linear_forms: Vec<Vec<u8>>,
    dim: usize,
}

fn pairing(x: &[i64], y: &[i64]) -> i64 {
    x.chunks(2)
        .zip(y.chunks(2))
        .map(|(p, q)| p[0] * q[1] - p[1] * q[0])
        .sum()
}

fn quadratic_mod2(v: &[u8]) -> u8 {
    v.chunks(2).map(|p| p[0] & p[1]).fold(0, |a, b| a ^ b)
}

/// Some `l` with `l . s = target(s)` for each row, over `F_2`; `None` if inconsistent.
fn solve_mod2(rows: &[Vec<u8>], rhs: &[u8], dim: usize) -> Option<Vec<u8>> {
    let mut aug: Vec<Vec<u8>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| r.iter().copied().chain([b]).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..dim {
        let Some(p) = (row..aug.len()).find(|&i| aug[i][col] == 1) else {
            continue;
        };
        aug.swap(row, p);
        for i in 0..aug.len() {
            if i != row && aug[i][col] == 1 {
                let src = aug[row].clone();
                for (x, y) in aug[i].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if aug[row..].iter().any(|r| r[dim] == 1) {
        return None;
    }
    let mut l = vec![0u8; dim];
    for (r, &col) in pivots.iter().enumerate() {
        l[col] = aug[r][dim];
    }
    Some(l)
}

impl TreeExtension {
    pub fn build(components: Vec<TreeComponent>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let k = components.len();
        if k == 0 {
            return Err(Error::NotATree("no components".into()));
        }
        if edges.len() != k - 1 {
            return Err(Error::NotATree(format!(
                "{} edges for {} components",
                edges.len(),
                k
            )));
        }
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for &(a, b) in &edges {
            if a >= k || b >= k {
                return Err(Error::NotATree(format!("edge {a}-{b} out of range")));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(Error::NotATree(format!("edge {a}-{b} closes a cycle")));
            }
            parent[ra] = rb;
        }

        let mut offsets = Vec::with_capacity(k);
        let mut linear_forms = Vec::with_capacity(k);
        let mut dim = 0;
        for comp in &components {
            let d = 2 * comp.genus;
            for s in &comp.nz_cycles {
                if s.len() != d {
                    return Err(Error::RankMismatch {
                        expected: d,
                        found: s.len(),
                    });
                }
                if s.iter().all(|x| x.rem_euclid(2) == 0) {
                    return Err(Error::InvalidArgument("NZ-cycle vanishes mod 2".into()));
                }
            }
            for (i, s) in comp.nz_cycles.iter().enumerate() {
                for (j, t) in comp.nz_cycles.iter().enumerate().skip(i + 1) {
                    if pairing(s, t) != 0 {
                        return Err(Error::NotIsotropic { i, j });
                    }
                }
            }
            let rows: Vec<Vec<u8>> = comp
                .nz_cycles
                .iter()
                .map(|s| s.iter().map(|x| x.rem_euclid(2) as u8).collect())
                .collect();
            let rhs: Vec<u8> = rows.iter().map(|r| quadratic_mod2(r)).collect();
            let l = solve_mod2(&rows, &rhs, d).expect("squaring is linear on an isotropic span");
            offsets.push(dim);
            linear_forms.push(l);
            dim += d;
        }
        Ok(TreeExtension {
            components,
            edges,
            offsets,
            linear_forms,
            dim,
        })
    }

    pub fn components(&self) -> &[TreeComponent] {
        &self.components
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Total rank `sum 2 g_j` of the abelian quotient.
    pub fn rank(&self) -> usize {
        self.dim
    }

    /// `2^(1 + sum 2 g_j)`.
    pub fn order(&self) -> u128 {
        1u128 << (1 + self.dim)
    }

    /// Image of surface generator `i`, numbered consecutively across components.
    pub fn generator(&self, i: usize) -> TreeElement {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        TreeElement { v, z: 0 }
    }

    /// The shared central generator, image of every Z-cycle.
    pub fn z_cycle_image(&self) -> TreeElement {
        TreeElement {
            v: vec![0; self.dim],
            z: 1,
        }
    }

    pub fn nz_cycle_images(&self, component: usize) -> Vec<TreeElement> {
        let off = self.offsets[component];
        self.components[component]
            .nz_cycles
            .iter()
            .map(|s| {
                let mut v = vec![0; self.dim];
                for (k, x) in s.iter().enumerate() {
                    v[off + k] = x.rem_euclid(2) as u8;
                }
                TreeElement { v, z: 0 }
            })
            .collect()
    }

    /// Image of a word whose letters are the generators of all components in order.
    pub fn word_image(&self, w: &Word) -> Result<TreeElement> {
        if w.rank() != self.dim {
            return Err(Error::RankMismatch {
                expected: self.dim,
                found: w.rank(),
            });
        }
        let mut e = self.identity();
        for (g, exp) in w.letters() {
            let x = self.generator(g);
            e = self.multiply(&e, &if exp > 0 { x } else { self.inverse(&x) });
        }
        Ok(e)
    }

    fn cocycle(&self, x: &[u8], y: &[u8]) -> u8 {
        let mut z = 0;
        for (j, l) in self.linear_forms.iter().enumerate() {
            let off = self.offsets[j];
            let d = l.len();
            let (xs, ys) = (&x[off..off + d], &y[off..off + d]);
            for i in (0..d).step_by(2) {
                z ^= xs[i] & ys[i + 1];
            }
            let lx = xs.iter().zip(l).fold(0, |a, (p, q)| a ^ (p & q));
            let ly = ys.iter().zip(l).fold(0, |a, (p, q)| a ^ (p & q));
            z ^= lx & ly;
        }
        z
    }
}

impl Group for TreeExtension {
    type Element = TreeElement;

    fn identity(&self) -> TreeElement {
        TreeElement {
            v: vec![0; self.dim],
            z: 0,
        }
    }

    fn multiply(&self, x: &TreeElement, y: &TreeElement) -> TreeElement {
        let v = x.v.iter().zip(&y.v).map(|(a, b)| a ^ b).collect();
        TreeElement {
            v,
            z: x.z ^ y.z ^ self.cocycle(&x.v, &y.v),
        }
    }

    fn inverse(&self, x: &TreeElement) -> TreeElement {
        // (v, c)^2 = (0, b(v, v)), so the inverse is (v, c + b(v, v))
        TreeElement {
            v: x.v.clone(),
            z: x.z ^ self.cocycle(&x.v, &x.v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::closure;
    use crate::words::{surface_relator, Alphabet};

    #[test]
    fn uc_orders() {
        assert_eq!(uc_order(1, 3).unwrap(), 9);
        assert_eq!(uc_order(2, 3).unwrap(), 19683);
        assert_eq!(uc_order(1, 5).unwrap(), 25);
        assert!(matches!(uc_order(1, 4), Err(Error::EvenModulus(4))));
        assert!(uc_order(1, 2).is_err());
    }

    #[test]
    fn uc_word_images() {
        let g = UCGroup::new(2, 3).unwrap();
        let s = Alphabet::surface(2);
        assert_eq!(
            g.uc_from_word(&s.parse("a1").unwrap()).unwrap(),
            g.generator(0)
        );
        let c = g.uc_from_word(&s.parse("[a1,b1]").unwrap()).unwrap();
        // 2 a1^b1 = -2 (a2^b2) after reduction
        let mut expected = g.identity_element();
        expected.w[g.pair_index(2, 3)] = 1;
        assert_eq!(c, expected);
        assert!(g
            .uc_from_word(&Alphabet::surface(1).parse("a1").unwrap())
            .is_err());
        for genus in 1..=4 {
            let g = UCGroup::new(genus, 3).unwrap();
            assert!(g
                .uc_from_word(&surface_relator(genus).unwrap())
                .unwrap()
                .is_identity());
        }
    }

    #[test]
    fn uc_element_orders() {
        let g = UCGroup::new(2, 9).unwrap();
        assert_eq!(g.uc_element_order(&g.identity()), 1);
        assert_eq!(g.uc_element_order(&g.generator(1)), 9);
        assert_eq!(g.uc_element_order(&g.power(&g.generator(1), 3)), 3);
        let x = g.multiply(&g.generator(0), &g.generator(3));
        assert_eq!(g.element_order(&x, 100), Some(g.uc_element_order(&x)));
    }

    #[test]
    fn uc_torus_is_abelian_of_order_9() {
        let g = UCGroup::new(1, 3).unwrap();
        let all = closure(&g, &[g.generator(0), g.generator(1)], 100).unwrap();
        assert_eq!(all.len(), 9);
    }

    fn torus(nz: Vec<Vec<i64>>) -> TreeComponent {
        TreeComponent {
            genus: 1,
            nz_cycles: nz,
        }
    }

    #[test]
    fn single_torus_extension() {
        let t = TreeExtension::build(vec![torus(vec![vec![1, 0]])], vec![]).unwrap();
        assert_eq!(t.order(), 8);
        let all = closure(&t, &[t.generator(0), t.generator(1)], 100).unwrap();
        assert_eq!(all.len(), 8);
        let z = t.z_cycle_image();
        assert!(!t.is_identity(&z));
        assert!(t.is_identity(&t.multiply(&z, &z)));
        for s in t.nz_cycle_images(0) {
            assert_eq!(t.element_order(&s, 10), Some(2));
        }
    }

    #[test]
    fn nz_cycle_needing_linear_correction() {
        // a1 + b1 squares to the centre under the plain cocycle
        let t = TreeExtension::build(vec![torus(vec![vec![1, 1]])], vec![]).unwrap();
        assert_eq!(t.element_order(&t.nz_cycle_images(0)[0], 10), Some(2));
    }

    #[test]
    fn chain_of_two_tori() {
        let t = TreeExtension::build(
            vec![torus(vec![vec![1, 0]]), torus(vec![vec![0, 1]])],
            vec![(0, 1)],
        )
        .unwrap();
        assert_eq!(t.order(), 32);
        let gens: Vec<_> = (0..4).map(|i| t.generator(i)).collect();
        assert_eq!(closure(&t, &gens, 100).unwrap().len(), 32);
        let s = Alphabet::surface(2);
        let sep = t.word_image(&s.parse("[a1,b1]").unwrap()).unwrap();
        let sep2 = t.word_image(&s.parse("[a2,b2]^-1").unwrap()).unwrap();
        assert_eq!(sep, t.z_cycle_image());
        assert_eq!(sep2, t.z_cycle_image());
        assert!(t.is_identity(&t.word_image(&surface_relator(2).unwrap()).unwrap()));
    }

    #[test]
    fn tree_errors() {
        let c = || torus(vec![]);
        assert!(matches!(
            TreeExtension::build(vec![c(), c()], vec![]),
            Err(Error::NotATree(_))
        ));
        assert!(matches!(
            TreeExtension::build(vec![c(), c(), c()], vec![(0, 1), (1, 0)]),
            Err(Error::NotATree(_))
        ));
        assert!(matches!(
            TreeExtension::build(vec![torus(vec![vec![1, 0], vec![0, 1]])], vec![]),
            Err(Error::NotIsotropic { i: 0, j: 1 })
        ));
        assert!(TreeExtension::build(vec![torus(vec![vec![2, 0]])], vec![]).is_err());
    }
}
