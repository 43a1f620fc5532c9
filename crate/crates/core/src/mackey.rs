//! The Mackey algebra of a fusion system: its canonical basis of induction-
//! conjugation-restriction elements, structure constants by straightening,
//! the centric quotient, an independent biset-composition oracle, and the
//! centric Burnside ring with its central embedding.

use crate::field::Field;
use crate::fusion::{FusionSystem, HomTable};
use crate::orbitprod::product_pairs;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// A basis element I_{phi(C)}^B c_phi R_C^A in canonical form: C is the least
/// object in its A-conjugacy class and phi the least table in its
/// Aut_B(B) \ Hom(C,B) / Aut_A(C) double coset.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MackeyBasisElement {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub phi: HomTable,
}

/// Canonicalizes (A, B, C <= A, phi : C -> B) under the double-coset relation
/// (C, phi) ~ (C^a, c_b . phi . c_a).
pub fn canonical_basis_element(
    f: &FusionSystem,
    a: usize,
    b: usize,
    c: usize,
    phi: &HomTable,
) -> MackeyBasisElement {
    let u = &f.universe;
    let c_elems = u.object(c);
    let mut best: Option<(usize, HomTable)> = None;
    for &g in u.object(a) {
        let ginv = u.s.inv(g);
        let cg: Vec<u16> = {
            let mut v: Vec<u16> = c_elems.iter().map(|&x| u.s.conj(ginv, x)).collect();
            v.sort_unstable();
            v
        };
        let cg_id = u.object_id(&cg);
        if let Some((bid, _)) = &best {
            if cg_id > *bid {
                continue;
            }
        }
        // base table on C^g: x -> phi(g x g^{-1})
        let base: HomTable = cg
            .iter()
            .map(|&x| {
                let pos = c_elems.binary_search(&u.s.conj(g, x)).unwrap();
                phi[pos]
            })
            .collect();
        for &k in u.object(b) {
            let cand: HomTable = base.iter().map(|&y| u.s.conj(k, y)).collect();
            match &best {
                Some((bid, t)) if (*bid, t) <= (cg_id, &cand) => {}
                _ => best = Some((cg_id, cand)),
            }
        }
    }
    let (c, phi) = best.unwrap();
    MackeyBasisElement { a, b, c, phi }
}

/// Which objects count as admissible C-levels.
#[derive(Clone, Debug)]
pub enum LevelFilter {
    /// The full Mackey algebra.
    All,
    /// The centric quotient: only the listed objects are kept as C-levels.
    Centric(Arc<Vec<bool>>),
}

impl LevelFilter {
    pub fn admits(&self, obj: usize) -> bool {
        match self {
            LevelFilter::All => true,
            LevelFilter::Centric(v) => v[obj],
        }
    }
}

/// Builds the filter for the centric quotient of `ambient` restricted to a
/// (sub)system's objects.
pub fn centric_filter(ambient: &FusionSystem) -> LevelFilter {
    let v: Vec<bool> = (0..ambient.universe.object_count())
        .map(|a| ambient.universe.is_subobject(a, ambient.top) && ambient.is_centric(a))
        .collect();
    LevelFilter::Centric(Arc::new(v))
}

/// The Mackey algebra mu_R(F) (or its centric quotient) with structure
/// constants computed over the integers; coefficients are specialized into a
/// field on demand.
pub struct MackeyAlgebra {
    pub f: Arc<FusionSystem>,
    pub filter: LevelFilter,
    pub basis: Vec<MackeyBasisElement>,
    index: HashMap<MackeyBasisElement, usize>,
    mult_cache: RefCell<HashMap<(usize, usize), Arc<Vec<(usize, i64)>>>>,
}

impl MackeyAlgebra {
    pub fn new(f: Arc<FusionSystem>, filter: LevelFilter) -> MackeyAlgebra {
        let u = &f.universe;
        let objects = f.objects();
        let mut basis = Vec::new();
        for &a in &objects {
            // C <= A up to A-conjugacy: orbit representatives by least id.
            let mut c_reps: Vec<usize> = Vec::new();
            let mut seen = vec![false; u.object_count()];
            for c in 0..u.object_count() {
                if !u.is_subobject(c, a) || seen[c] {
                    continue;
                }
                c_reps.push(c);
                for &g in u.object(a) {
                    seen[u.conj_object(g, c)] = true;
                }
            }
            for &b in &objects {
                for &c in &c_reps {
                    if !filter.admits(c) {
                        continue;
                    }
                    for phi in f.hom_set(c, b) {
                        let e = canonical_basis_element(&f, a, b, c, phi);
                        if !basis.contains(&e) {
                            basis.push(e);
                        }
                    }
                }
            }
        }
        basis.sort();
        let index = basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        MackeyAlgebra {
            f,
            filter,
            basis,
            index,
            mult_cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, e: &MackeyBasisElement) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// The index of I_H^H.
    pub fn idempotent_at(&self, h: usize) -> usize {
        let e = canonical_basis_element(&self.f, h, h, h, &self.f.universe.incl_table(h));
        self.index[&e]
    }

    /// Structure constants of basis product e2 . e1 (first e1 : A1 -> B1,
    /// then e2 : A2 -> B2; zero unless B1 = A2), by straightening through the
    /// Mackey formula.
    pub fn basis_product(&self, i2: usize, i1: usize) -> Arc<Vec<(usize, i64)>> {
        if let Some(hit) = self.mult_cache.borrow().get(&(i2, i1)) {
            return hit.clone();
        }
        let out = Arc::new(self.compute_basis_product(i2, i1));
        self.mult_cache.borrow_mut().insert((i2, i1), out.clone());
        out
    }

    fn compute_basis_product(&self, i2: usize, i1: usize) -> Vec<(usize, i64)> {
        let e1 = &self.basis[i1];
        let e2 = &self.basis[i2];
        if e1.b != e2.a {
            return Vec::new();
        }
        let f = &self.f;
        let u = &f.universe;
        let c1_elems = u.object(e1.c);
        let im1 = u.table_image(&e1.phi);
        let im1_id = u.object_id(&im1);
        let c2_elems = u.object(e2.c);
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for x in crate::orbitprod::double_cosets_within(f, e2.a, e2.c, im1_id) {
            let xinv = u.s.inv(x);
            let c2x = u.s.conj_subgroup(xinv, c2_elems);
            let inter = crate::grp::intersect_sorted(&c2x, &im1);
            // D = phi1^{-1}(C2^x cap phi1(C1)) and psi = phi2 . c_x . phi1.
            let d: Vec<u16> = {
                let mut v: Vec<u16> = inter
                    .iter()
                    .map(|y| {
                        let pos = e1.phi.iter().position(|z| z == y).unwrap();
                        c1_elems[pos]
                    })
                    .collect();
                v.sort_unstable();
                v
            };
            let d_id = u.object_id(&d);
            if !self.filter.admits(d_id) {
                continue;
            }
            let psi: HomTable = d
                .iter()
                .map(|&t| {
                    let y = e1.phi[c1_elems.binary_search(&t).unwrap()];
                    let z = u.s.conj(x, y);
                    e2.phi[c2_elems.binary_search(&z).unwrap()]
                })
                .collect();
            let term = canonical_basis_element(f, e1.a, e2.b, d_id, &psi);
            let idx = self.index[&term];
            *acc.entry(idx).or_insert(0) += 1;
        }
        acc.into_iter().collect()
    }
}

/// A finitely supported linear combination of basis elements of one algebra.
#[derive(Clone, PartialEq, Debug)]
pub struct AlgElt<K: Field> {
    pub coeffs: BTreeMap<usize, K::Elem>,
}

impl<K: Field> AlgElt<K> {
    pub fn zero() -> AlgElt<K> {
        AlgElt {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(k: &K, i: usize) -> AlgElt<K> {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(i, k.one());
        AlgElt { coeffs }
    }

    pub fn insert(&mut self, k: &K, i: usize, v: K::Elem) {
        if let Some(cur) = self.coeffs.get(&i) {
            let s = k.add(cur, &v);
            if k.is_zero(&s) {
                self.coeffs.remove(&i);
            } else {
                self.coeffs.insert(i, s);
            }
        } else if !k.is_zero(&v) {
            self.coeffs.insert(i, v);
        }
    }

    pub fn add(&self, k: &K, other: &AlgElt<K>) -> AlgElt<K> {
        let mut out = self.clone();
        for (i, v) in &other.coeffs {
            out.insert(k, *i, v.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl MackeyAlgebra {
    pub fn one<K: Field>(&self, k: &K) -> AlgElt<K> {
        let mut out = AlgElt::zero();
        for h in self.f.objects() {
            if match &self.filter {
                LevelFilter::All => true,
                LevelFilter::Centric(v) => v[h],
            } {
                out.insert(k, self.idempotent_at(h), k.one());
            }
        }
        out
    }

    pub fn mul<K: Field>(&self, k: &K, x: &AlgElt<K>, y: &AlgElt<K>) -> AlgElt<K> {
        // x . y: first apply y, then x.
        let mut out = AlgElt::zero();
        for (i2, c2) in &x.coeffs {
            for (i1, c1) in &y.coeffs {
                let scale = k.mul(c2, c1);
                if k.is_zero(&scale) {
                    continue;
                }
                for (idx, m) in self.basis_product(*i2, *i1).iter() {
                    out.insert(k, *idx, k.mul(&scale, &k.from_i64(*m)));
                }
            }
        }
        out
    }

}

/// pi : mu -> mu/I on canonical representatives: drops every basis element
/// whose C-level is not admitted by the target filter.
pub fn centric_project<K: Field>(
    _k: &K,
    full: &MackeyAlgebra,
    centric: &MackeyAlgebra,
    x: &AlgElt<K>,
) -> AlgElt<K> {
    let mut out = AlgElt::zero();
    for (i, v) in &x.coeffs {
        let e = &full.basis[*i];
        if let Some(j) = centric.index_of(e) {
            out.coeffs.insert(j, v.clone());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Independent oracle: composition of bisets by explicit orbit counting.
// ---------------------------------------------------------------------------

/// A point of (B x A)/Delta(C,phi): the canonical representative of the orbit
/// of (b, a) under (b, a) . c = (b phi(c), a c).
fn biset_points(f: &FusionSystem, e: &MackeyBasisElement) -> Vec<(u16, u16)> {
    let u = &f.universe;
    let b_elems = u.object(e.b);
    let a_elems = u.object(e.a);
    let c_elems = u.object(e.c);
    let mut points = Vec::new();
    let mut seen: std::collections::BTreeSet<(u16, u16)> = Default::default();
    for &b in b_elems {
        for &a in a_elems {
            if seen.contains(&(b, a)) {
                continue;
            }
            let mut orbit = Vec::new();
            for (ci, &c) in c_elems.iter().enumerate() {
                let p = (u.s.mul(b, e.phi[ci]), u.s.mul(a, c));
                orbit.push(p);
            }
            let rep = *orbit.iter().min().unwrap();
            for p in orbit {
                seen.insert(p);
            }
            points.push(rep);
        }
    }
    points.sort_unstable();
    points.dedup();
    points
}

fn canonical_point(f: &FusionSystem, e: &MackeyBasisElement, b: u16, a: u16) -> (u16, u16) {
    let u = &f.universe;
    let c_elems = u.object(e.c);
    c_elems
        .iter()
        .enumerate()
        .map(|(ci, &c)| (u.s.mul(b, e.phi[ci]), u.s.mul(a, c)))
        .min()
        .unwrap()
}

/// Composes the bisets of two basis elements (e2 after e1) by orbit counting
/// and decomposes the result into canonical basis elements. The stabilizer of
/// each transitive summand must be a twisted diagonal; anything else would
/// mean the product escaped the straightening span and is reported as an
/// error.
pub fn biset_compose_oracle(
    f: &FusionSystem,
    e2: &MackeyBasisElement,
    e1: &MackeyBasisElement,
) -> Result<Vec<(MackeyBasisElement, i64)>, String> {
    if e1.b != e2.a {
        return Ok(Vec::new());
    }
    let u = &f.universe;
    let x2 = biset_points(f, e2); // (Cb x B)-points, pairs (cb, b)
    let x1 = biset_points(f, e1); // (B x A)-points, pairs (b, a)
    let idx2: HashMap<(u16, u16), usize> = x2.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let idx1: HashMap<(u16, u16), usize> = x1.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let n2 = x2.len();
    let n1 = x1.len();
    // Union-find over pairs (p2, p1) with (p2 . b, p1) ~ (p2, b . p1).
    let mut parent: Vec<usize> = (0..n2 * n1).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let b_elems = u.object(e1.b).to_vec();
    for i2 in 0..n2 {
        for i1 in 0..n1 {
            for &b in &b_elems {
                // Identify (p2 . b, p1) with (p2, b . p1): the right B-action
                // on x2 divides the B-coordinate, the left action multiplies.
                let p2 = x2[i2];
                let p1 = x1[i1];
                let p2b = canonical_point(f, e2, p2.0, u.s.mul(u.s.inv(b), p2.1));
                let bp1 = canonical_point(f, e1, u.s.mul(b, p1.0), p1.1);
                let j2 = idx2[&p2b];
                let j1 = idx1[&bp1];
                let (r1, r2) = (find(&mut parent, j2 * n1 + i1), find(&mut parent, i2 * n1 + j1));
                if r1 != r2 {
                    parent[r1] = r2;
                }
            }
        }
    }
    // Orbits of the (Cb, A)-action on the composite.
    let cb_elems = u.object(e2.b).to_vec();
    let a_elems = u.object(e1.a).to_vec();
    let act = |parent: &mut Vec<usize>, pt: usize, cb: u16, a: u16| -> usize {
        let (i2, i1) = (pt / n1, pt % n1);
        let p2 = x2[i2];
        let p1 = x1[i1];
        let q2 = canonical_point(f, e2, u.s.mul(cb, p2.0), p2.1);
        let q1 = canonical_point(f, e1, p1.0, u.s.mul(u.s.inv(a), p1.1));
        find(parent, idx2[&q2] * n1 + idx1[&q1])
    };
    let mut class_reps: Vec<usize> = Vec::new();
    for i in 0..n2 * n1 {
        let r = find(&mut parent, i);
        if !class_reps.contains(&r) {
            class_reps.push(r);
        }
    }
    // Partition composite points into transitive (Cb, A)-orbits.
    let mut assigned: BTreeMap<usize, usize> = Default::default();
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for &start in &class_reps {
        if assigned.contains_key(&start) {
            continue;
        }
        let id = orbits.len();
        let mut orbit = vec![start];
        assigned.insert(start, id);
        let mut head = 0;
        while head < orbit.len() {
            let pt = orbit[head];
            head += 1;
            for &cb in &cb_elems {
                for &a in &a_elems {
                    let q = act(&mut parent, pt, cb, a);
                    if !assigned.contains_key(&q) {
                        assigned.insert(q, id);
                        orbit.push(q);
                    }
                }
            }
        }
        orbits.push(orbit);
    }
    // Each orbit: stabilizer of its least point must be a twisted diagonal.
    let mut acc: BTreeMap<MackeyBasisElement, i64> = Default::default();
    for orbit in orbits {
        let z0 = *orbit.iter().min().unwrap();
        let mut stab: Vec<(u16, u16)> = Vec::new();
        for &cb in &cb_elems {
            for &a in &a_elems {
                if act(&mut parent, z0, cb, a) == find(&mut parent, z0) {
                    stab.push((cb, a));
                }
            }
        }
        // Stabilizer pairs are (phi(c), c^{-1}); recover (C', psi).
        let mut c_prime: Vec<u16> = stab.iter().map(|&(_, y)| u.s.inv(y)).collect();
        c_prime.sort_unstable();
        if c_prime.len() != stab.len() {
            return Err("stabilizer is not a twisted diagonal".to_string());
        }
        let c_id = u
            .lattice
            .id_of(&c_prime)
            .ok_or("stabilizer second projection is not a subgroup")?;
        let psi: HomTable = c_prime
            .iter()
            .map(|&c| {
                stab.iter()
                    .find(|&&(_, y)| u.s.inv(y) == c)
                    .map(|&(x, _)| x)
                    .unwrap()
            })
            .collect();
        if !u.is_valid_hom(c_id, &psi, e2.b) {
            return Err("stabilizer does not define a homomorphism".to_string());
        }
        if !f.contains_table(c_id, e2.b, &psi) {
            return Err("recovered twist is not a morphism of the system".to_string());
        }
        let term = canonical_basis_element(f, e1.a, e2.b, c_id, &psi);
        *acc.entry(term).or_insert(0) += 1;
    }
    Ok(acc.into_iter().collect())
}

// ---------------------------------------------------------------------------
// The centric Burnside ring.
// ---------------------------------------------------------------------------

/// B_R(F^c): coefficients on centric F-isomorphism classes, indexed by their
/// canonical fully-normalized least representative.
pub struct BurnsideRing {
    pub f: Arc<FusionSystem>,
    /// Canonical class representatives, sorted.
    pub classes: Vec<usize>,
    class_of_obj: HashMap<usize, usize>,
    /// products[i][j] = coefficients of class_i . class_j.
    products: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct BurnsideElt<K: Field> {
    pub coeffs: Vec<K::Elem>,
}

impl BurnsideRing {
    pub fn new(f: Arc<FusionSystem>) -> Result<BurnsideRing, String> {
        let centrics = f.centric_objects();
        let mut classes: Vec<usize> = Vec::new();
        let mut class_of_obj = HashMap::new();
        for &h in &centrics {
            let mut cls = f.iso_class(h);
            cls.sort_unstable();
            let rep = *cls
                .iter()
                .find(|&&k| f.is_fully_normalized(k))
                .ok_or("class without fully normalized member")?;
            if !classes.contains(&rep) {
                classes.push(rep);
            }
            class_of_obj.insert(h, rep);
        }
        classes.sort_unstable();
        let class_index: HashMap<usize, usize> =
            classes.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let n = classes.len();
        let mut products = vec![vec![vec![0i64; n]; n]; n];
        for (i, &h) in classes.iter().enumerate() {
            for (j, &k) in classes.iter().enumerate() {
                let set = product_pairs(&f, h, k)?;
                for p in set.pairs {
                    let rep = class_of_obj[&p.a];
                    products[i][j][class_index[&rep]] += 1;
                }
            }
        }
        let class_of_obj = class_of_obj
            .into_iter()
            .map(|(h, rep)| (h, class_index[&rep]))
            .collect();
        Ok(BurnsideRing {
            f,
            classes,
            class_of_obj,
            products,
        })
    }

    pub fn class_index_of(&self, obj: usize) -> usize {
        self.class_of_obj[&obj]
    }

    pub fn zero<K: Field>(&self, k: &K) -> BurnsideElt<K> {
        BurnsideElt {
            coeffs: vec![k.zero(); self.classes.len()],
        }
    }

    pub fn class_elt<K: Field>(&self, k: &K, obj: usize) -> BurnsideElt<K> {
        let mut e = self.zero(k);
        e.coeffs[self.class_index_of(obj)] = k.one();
        e
    }

    pub fn mul<K: Field>(&self, k: &K, x: &BurnsideElt<K>, y: &BurnsideElt<K>) -> BurnsideElt<K> {
        let n = self.classes.len();
        let mut out = self.zero(k);
        for i in 0..n {
            if k.is_zero(&x.coeffs[i]) {
                continue;
            }
            for j in 0..n {
                let c = k.mul(&x.coeffs[i], &y.coeffs[j]);
                if k.is_zero(&c) {
                    continue;
                }
                for l in 0..n {
                    let m = self.products[i][j][l];
                    if m != 0 {
                        let t = k.mul(&c, &k.from_i64(m));
                        out.coeffs[l] = k.add(&out.coeffs[l], &t);
                    }
                }
            }
        }
        out
    }

    pub fn add<K: Field>(&self, k: &K, x: &BurnsideElt<K>, y: &BurnsideElt<K>) -> BurnsideElt<K> {
        BurnsideElt {
            coeffs: x
                .coeffs
                .iter()
                .zip(&y.coeffs)
                .map(|(a, b)| k.add(a, b))
                .collect(),
        }
    }

    /// The multiplicative identity, by solving u . X = X for every class X,
    /// plus the inverse of the class of S. Fails when the coefficient ring is
    /// not p-local (the system is then singular).
    pub fn unit_and_s_inverse<K: Field>(
        &self,
        k: &K,
    ) -> Result<(BurnsideElt<K>, BurnsideElt<K>), String> {
        let n = self.classes.len();
        // rows indexed by (X class j, output class l), unknowns lambda_i:
        // sum_i lambda_i m[i][j][l] = delta_{j,l}.
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for j in 0..n {
            for l in 0..n {
                rows.push((0..n).map(|i| k.from_i64(self.products[i][j][l])).collect::<Vec<_>>());
                rhs.push(if j == l { k.one() } else { k.zero() });
            }
        }
        let m = crate::matrix::Mat::from_rows(k, rows);
        let unit = m
            .solve(k, &rhs)
            .ok_or("no unit: not p-local or inconsistent structure constants")?;
        let unit: BurnsideElt<K> = BurnsideElt { coeffs: unit };
        // S-bar . v = unit.
        let s_class = self.class_index_of(self.f.top);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for l in 0..n {
            rows.push(
                (0..n)
                    .map(|c| k.from_i64(self.products[s_class][c][l]))
                    .collect::<Vec<_>>(),
            );
            rhs.push(unit.coeffs[l].clone());
        }
        let m = crate::matrix::Mat::from_rows(k, rows);
        let sinv = m
            .solve(k, &rhs)
            .ok_or("class of S is not invertible: ring is not p-local")?;
        Ok((unit, BurnsideElt { coeffs: sinv }))
    }

    /// Gamma(H) = sum over J centric and (A, phi) in [J x H] of pi(I_A^J R_A^J),
    /// an element of the centric quotient algebra.
    pub fn gamma<K: Field>(&self, k: &K, centric_alg: &MackeyAlgebra, h: usize) -> AlgElt<K> {
        let f = &self.f;
        let mut out = AlgElt::zero();
        for j in f.centric_objects() {
            let set = product_pairs(f, j, h).expect("centric product");
            for p in set.pairs {
                let e = canonical_basis_element(f, j, j, p.a, &f.universe.incl_table(p.a));
                if let Some(idx) = centric_alg.index_of(&e) {
                    out.insert(k, idx, k.one());
                }
            }
        }
        out
    }

    /// Gamma-bar of a Burnside element.
    pub fn gamma_bar<K: Field>(
        &self,
        k: &K,
        centric_alg: &MackeyAlgebra,
        x: &BurnsideElt<K>,
    ) -> AlgElt<K> {
        let mut out = AlgElt::zero();
        for (i, c) in x.coeffs.iter().enumerate() {
            if k.is_zero(c) {
                continue;
            }
            let g = self.gamma(k, centric_alg, self.classes[i]);
            for (idx, v) in g.coeffs {
                out.insert(k, idx, k.mul(c, &v));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::samples;
    use rand::{Rng, SeedableRng};

    fn f_c2() -> Arc<FusionSystem> {
        let c2 = samples::c2();
        Arc::new(FusionSystem::from_group(&c2, &[0, 1], 2).unwrap())
    }

    fn f_d8_d8() -> Arc<FusionSystem> {
        let d8 = samples::d8();
        let all: Vec<u16> = (0..8).collect();
        Arc::new(FusionSystem::from_group(&d8, &all, 2).unwrap())
    }

    fn f1() -> Arc<FusionSystem> {
        let g = samples::example_ambient();
        let syl = g.sylow_subgroup(2).unwrap();
        Arc::new(FusionSystem::from_group(&g, &syl, 2).unwrap())
    }

    #[test]
    fn basis_count_c2_is_five() {
        let alg = MackeyAlgebra::new(f_c2(), LevelFilter::All);
        assert_eq!(alg.dim(), 5);
    }

    #[test]
    fn c2_count_matches_transitive_biset_enumeration() {
        // Independent oracle: isomorphism classes of transitive (B,A)-bisets
        // with twisted-diagonal stabilizer, enumerated directly.
        let f = f_c2();
        let mut count = 0;
        for a in f.objects() {
            for b in f.objects() {
                let mut found: Vec<MackeyBasisElement> = Vec::new();
                for c in f.objects() {
                    if !f.universe.is_subobject(c, a) {
                        continue;
                    }
                    for phi in f.hom_set(c, b) {
                        let e = canonical_basis_element(&f, a, b, c, phi);
                        if !found.contains(&e) {
                            found.push(e);
                        }
                    }
                }
                count += found.len();
            }
        }
        assert_eq!(count, 5);
    }

    #[test]
    fn identity_idempotents() {
        let k = PrimeField::new(2).unwrap();
        let alg = MackeyAlgebra::new(f_d8_d8(), LevelFilter::All);
        let one = alg.one(&k);
        for h in alg.f.objects() {
            let e = AlgElt::basis(&k, alg.idempotent_at(h));
            assert_eq!(alg.mul(&k, &e, &e), e);
            assert_eq!(alg.mul(&k, &one, &e), e);
            assert_eq!(alg.mul(&k, &e, &one), e);
            for h2 in alg.f.objects() {
                if h2 != h {
                    let e2 = AlgElt::basis(&k, alg.idempotent_at(h2));
                    assert!(alg.mul(&k, &e, &e2).is_zero());
                }
            }
        }
    }

    #[test]
    fn conjugation_class_well_defined() {
        // Any two representatives of an orbit morphism give the same basis
        // element I_{phi(H)}^K c_phi.
        let f = f1();
        let u = &f.universe;
        for a in f.objects() {
            for b in f.objects() {
                for phi in f.hom_set(a, b) {
                    let e = canonical_basis_element(&f, a, b, a, phi);
                    for &kk in u.object(b) {
                        let post: HomTable = phi.iter().map(|&x| u.s.conj(kk, x)).collect();
                        assert_eq!(e, canonical_basis_element(&f, a, b, a, &post));
                    }
                }
            }
        }
    }

    #[test]
    fn mackey_formula_example_in_d8() {
        // R_V^S . I_V^S = I_V^V + I_V^V c_x over the two double cosets.
        let k = PrimeField::new(2).unwrap();
        let f = f_d8_d8();
        let alg = MackeyAlgebra::new(f.clone(), LevelFilter::All);
        let u = &f.universe;
        let v = f
            .objects()
            .into_iter()
            .find(|&a| u.object(a).len() == 4 && u.object(a).iter().all(|&x| u.s.element_order(x) <= 2))
            .unwrap();
        let i_v_s = canonical_basis_element(&f, v, f.top, v, &u.incl_table(v));
        let r_v_s = canonical_basis_element(&f, f.top, v, v, &u.incl_table(v));
        let x = AlgElt::basis(&k, alg.index_of(&i_v_s).unwrap());
        let r = AlgElt::basis(&k, alg.index_of(&r_v_s).unwrap());
        let prod = alg.mul(&k, &r, &x);
        assert_eq!(prod.coeffs.len(), 2);
        for (&idx, _) in &prod.coeffs {
            let e = &alg.basis[idx];
            assert_eq!((e.a, e.b, e.c), (v, v, v));
        }
    }

    #[test]
    fn oracle_agrees_on_all_c2_pairs() {
        let k = PrimeField::new(3).unwrap();
        let f = f_c2();
        let alg = MackeyAlgebra::new(f.clone(), LevelFilter::All);
        for i2 in 0..alg.dim() {
            for i1 in 0..alg.dim() {
                let fast: Vec<(usize, i64)> = alg.basis_product(i2, i1).to_vec();
                let slow = biset_compose_oracle(&f, &alg.basis[i2], &alg.basis[i1]).unwrap();
                let slow: Vec<(usize, i64)> = slow
                    .into_iter()
                    .map(|(e, m)| (alg.index_of(&e).unwrap(), m))
                    .collect();
                assert_eq!(fast, slow, "mismatch at ({i2},{i1})");
            }
        }
        let _ = k;
    }

    #[test]
    fn oracle_agrees_on_sampled_d8_pairs() {
        let f = f_d8_d8();
        let alg = MackeyAlgebra::new(f.clone(), LevelFilter::All);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xD8);
        for _ in 0..80 {
            let i2 = rng.gen_range(0..alg.dim());
            let i1 = rng.gen_range(0..alg.dim());
            let fast: Vec<(usize, i64)> = alg.basis_product(i2, i1).to_vec();
            let slow: Vec<(usize, i64)> = biset_compose_oracle(&f, &alg.basis[i2], &alg.basis[i1])
                .unwrap()
                .into_iter()
                .map(|(e, m)| (alg.index_of(&e).unwrap(), m))
                .collect();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn associativity_full_small_systems() {
        for f in [f_c2(), f_d8_d8()] {
            let k = PrimeField::new(2).unwrap();
            let alg = MackeyAlgebra::new(f, LevelFilter::All);
            let n = alg.dim();
            // Skip incompatible chains; products there are zero on both sides.
            for i in 0..n {
                for j in 0..n {
                    if alg.basis[j].b != alg.basis[i].a {
                        continue;
                    }
                    for l in 0..n {
                        if alg.basis[l].b != alg.basis[j].a {
                            continue;
                        }
                        let x = AlgElt::basis(&k, i);
                        let y = AlgElt::basis(&k, j);
                        let z = AlgElt::basis(&k, l);
                        let left = alg.mul(&k, &alg.mul(&k, &x, &y), &z);
                        let right = alg.mul(&k, &x, &alg.mul(&k, &y, &z));
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn algebra_inclusion_preserves_products() {
        // mu(F_V(V)) inside mu(F_S(S)): products agree, unit only for V = S.
        let k = PrimeField::new(2).unwrap();
        let f = f_d8_d8();
        let u = &f.universe;
        let v = f
            .objects()
            .into_iter()
            .find(|&a| u.object(a).len() == 4 && u.object(a).iter().all(|&x| u.s.element_order(x) <= 2))
            .unwrap();
        let sub = Arc::new(f.group_subsystem(v));
        let small = MackeyAlgebra::new(sub.clone(), LevelFilter::All);
        let big = MackeyAlgebra::new(f.clone(), LevelFilter::All);
        for i in 0..small.dim() {
            for j in 0..small.dim() {
                if small.basis[j].b != small.basis[i].a {
                    continue;
                }
                let bi = big.index_of(&small.basis[i]).unwrap();
                let bj = big.index_of(&small.basis[j]).unwrap();
                let inside: Vec<(MackeyBasisElement, i64)> = small
                    .basis_product(i, j)
                    .iter()
                    .map(|&(t, m)| (small.basis[t].clone(), m))
                    .collect();
                let outside: Vec<(MackeyBasisElement, i64)> = big
                    .basis_product(bi, bj)
                    .iter()
                    .map(|&(t, m)| (big.basis[t].clone(), m))
                    .collect();
                assert_eq!(inside, outside);
            }
        }
        // Unit not preserved: 1_{mu(F_V(V))} is a proper sub-sum of 1_{mu(F)}.
        let small_one = small.one(&k);
        let big_one = big.one(&k);
        assert!(small_one.coeffs.len() < big_one.coeffs.len());
    }

    #[test]
    fn centric_projection_kills_trivial_level() {
        let k = PrimeField::new(2).unwrap();
        let f = f_d8_d8();
        let full = MackeyAlgebra::new(f.clone(), LevelFilter::All);
        let cen = MackeyAlgebra::new(f.clone(), centric_filter(&f));
        // I_1^1 dies (trivial subgroup is not centric in D8).
        let i11 = AlgElt::basis(&k, full.idempotent_at(0));
        assert!(centric_project(&k, &full, &cen, &i11).is_zero());
        // I_S^S survives.
        let iss = AlgElt::basis(&k, full.idempotent_at(f.top));
        assert!(!centric_project(&k, &full, &cen, &iss).is_zero());
    }

    #[test]
    fn example_idempotent_squares_to_itself() {
        // Over F2 the reduction of the paper's idempotent at H1 is
        // c_phi + c_phi^2 with phi of order 3 in Aut(H1).
        let k = PrimeField::new(2).unwrap();
        let f = f1();
        let cen = MackeyAlgebra::new(f.clone(), centric_filter(&f));
        let u = &f.universe;
        let v = f
            .centric_objects()
            .into_iter()
            .find(|&a| u.object(a).len() == 4)
            .unwrap();
        let phi = f
            .aut(v)
            .iter()
            .find(|t| {
                // order 3 automorphism
                let t2 = u.compose_tables(v, t, v, t);
                let t3 = u.compose_tables(v, &t2, v, t);
                t3 == u.incl_table(v) && **t != u.incl_table(v)
            })
            .unwrap()
            .clone();
        let phi2 = u.compose_tables(v, &phi, v, &phi);
        let e1 = canonical_basis_element(&f, v, v, v, &phi);
        let e2 = canonical_basis_element(&f, v, v, v, &phi2);
        assert_ne!(e1, e2);
        let mut x: AlgElt<PrimeField> = AlgElt::zero();
        x.insert(&k, cen.index_of(&e1).unwrap(), 1);
        x.insert(&k, cen.index_of(&e2).unwrap(), 1);
        assert_eq!(cen.mul(&k, &x, &x), x);
    }

    #[test]
    fn burnside_in_inner_system() {
        // In F_S(S): S-bar is the unit and V-bar . V-bar = 2 V-bar.
        let q = Rationals;
        let f = f_d8_d8();
        let ring = BurnsideRing::new(f.clone()).unwrap();
        let (unit, sinv) = ring.unit_and_s_inverse(&q).unwrap();
        let sbar = ring.class_elt(&q, f.top);
        assert_eq!(unit, sbar);
        assert_eq!(ring.mul(&q, &sbar, &sinv), unit);
        let u = &f.universe;
        let v = f
            .centric_objects()
            .into_iter()
            .find(|&a| u.object(a).len() == 4 && u.object(a).iter().all(|&x| u.s.element_order(x) <= 2))
            .unwrap();
        let vbar = ring.class_elt(&q, v);
        let prod = ring.mul(&q, &vbar, &vbar);
        let mut expect = ring.zero(&q);
        expect.coeffs[ring.class_index_of(v)] = q.from_i64(2);
        assert_eq!(prod, expect);
        // S-bar is a non-zero divisor over Q, so Gamma-bar is injective.
        let cen = MackeyAlgebra::new(f.clone(), centric_filter(&f));
        let mut rows = Vec::new();
        for &c in &ring.classes {
            let g = ring.gamma(&q, &cen, c);
            let mut row = vec![q.zero(); cen.dim()];
            for (i, v) in g.coeffs {
                row[i] = v;
            }
            rows.push(row);
        }
        let m = crate::matrix::Mat::from_rows(&q, rows);
        assert_eq!(m.rank(&q), ring.classes.len());
    }

    #[test]
    fn burnside_commutative_associative() {
        let k = PrimeField::new(2).unwrap();
        for f in [f_d8_d8(), f1()] {
            let ring = BurnsideRing::new(f).unwrap();
            let n = ring.classes.len();
            for i in 0..n {
                for j in 0..n {
                    let x = ring.class_elt(&k, ring.classes[i]);
                    let y = ring.class_elt(&k, ring.classes[j]);
                    assert_eq!(ring.mul(&k, &x, &y), ring.mul(&k, &y, &x));
                    for l in 0..n {
                        let z = ring.class_elt(&k, ring.classes[l]);
                        assert_eq!(
                            ring.mul(&k, &ring.mul(&k, &x, &y), &z),
                            ring.mul(&k, &x, &ring.mul(&k, &y, &z))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_facts_on_f1() {
        let f = f1();
        let ring = BurnsideRing::new(f.clone()).unwrap();
        let cen = MackeyAlgebra::new(f.clone(), centric_filter(&f));
        for k_field in [PrimeField::new(2).unwrap()] {
            let k = &k_field;
            // Centrality: Gamma(H) commutes with every basis element.
            for &h in &ring.classes {
                let g = ring.gamma(k, &cen, h);
                for i in 0..cen.dim() {
                    let b = AlgElt::basis(k, i);
                    assert_eq!(cen.mul(k, &g, &b), cen.mul(k, &b, &g));
                }
                // Conjugation invariance.
                for h2 in f.iso_class(h) {
                    assert_eq!(g, ring.gamma(k, &cen, h2));
                }
            }
            // Gamma(K)Gamma(H) = sum over [K x H] of Gamma(A).
            for &h in &ring.classes {
                for &kk in &ring.classes {
                    let lhs = cen.mul(k, &ring.gamma(k, &cen, kk), &ring.gamma(k, &cen, h));
                    let mut rhs = AlgElt::zero();
                    for p in product_pairs(&f, kk, h).unwrap().pairs {
                        let g = ring.gamma(k, &cen, p.a);
                        rhs = rhs.add(k, &g);
                    }
                    assert_eq!(lhs, rhs);
                }
            }
            // Gamma-bar(unit) = 1 in the centric quotient.
            let (unit, _) = ring.unit_and_s_inverse(k).unwrap();
            assert_eq!(ring.gamma_bar(k, &cen, &unit), cen.one(k));
        }
        // Over the rationals too.
        let q = Rationals;
        let (unit, sinv) = ring.unit_and_s_inverse(&q).unwrap();
        let sbar = ring.class_elt(&q, f.top);
        assert_eq!(ring.mul(&q, &sbar, &sinv), unit);
        assert_eq!(ring.gamma_bar(&q, &cen, &unit), cen.one(&q));
    }
}
