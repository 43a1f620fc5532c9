//! Products in the additive completion of the centric orbit category: the
//! canonical representing sets [H x_F K], pullbacks, the seven rewrite
//! identities, and the normalizer-product machinery that decomposes
//! [H x_F K] along [N_F x K].

use crate::fusion::{FusionSystem, HomTable, OrbitMorphism};
use crate::grp::{intersect_sorted, subset_sorted};

/// An element (A, phi-bar) of a product set: A <= H centric, phi-bar : A -> K
/// in the centric orbit category.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ProductPair {
    pub a: usize,
    pub phi: OrbitMorphism,
}

/// A canonical choice of [H x_F K].
#[derive(Clone, Debug)]
pub struct ProductSet {
    pub h: usize,
    pub k: usize,
    pub pairs: Vec<ProductPair>,
}

/// (A, phi) <=_W (B, psi): some h in W has A^h <= B and phi.c_h = psi.incl
/// as orbit morphisms out of A^h.
pub fn pair_le(f: &FusionSystem, w: usize, p1: &ProductPair, p2: &ProductPair) -> bool {
    debug_assert_eq!(p1.phi.dst, p2.phi.dst);
    let u = &f.universe;
    let a1 = u.object(p1.a);
    let b2 = u.object(p2.a);
    for &h in u.object(w) {
        let hinv = u.s.inv(h);
        let a1_h: Vec<u16> = {
            let mut v: Vec<u16> = a1.iter().map(|&x| u.s.conj(hinv, x)).collect();
            v.sort_unstable();
            v
        };
        if !subset_sorted(&a1_h, b2) {
            continue;
        }
        let ah_id = u.object_id(&a1_h);
        // phi composed with c_h : A^h -> A.
        let lhs: HomTable = a1_h
            .iter()
            .map(|&x| {
                let ax = u.s.conj(h, x);
                let pos = a1.binary_search(&ax).unwrap();
                p1.phi.rep[pos]
            })
            .collect();
        let rhs = u.restrict_table(p2.a, &p2.phi.rep, ah_id);
        if f.orbit_canonical(ah_id, p1.phi.dst, &lhs) == f.orbit_canonical(ah_id, p1.phi.dst, &rhs) {
            return true;
        }
    }
    false
}

pub fn pair_equiv(f: &FusionSystem, w: usize, p1: &ProductPair, p2: &ProductPair) -> bool {
    pair_le(f, w, p1, p2) && pair_le(f, w, p2, p1)
}

/// All maximal pairs for the product of `h` and `k`, before choosing
/// equivalence-class representatives.
pub fn all_maximal_pairs(f: &FusionSystem, h: usize, k: usize) -> Vec<ProductPair> {
    let u = &f.universe;
    let mut cands = Vec::new();
    for a in f.objects() {
        if !u.is_subobject(a, h) || !f.is_centric(a) {
            continue;
        }
        for m in f.orbit_hom_set(a, k) {
            cands.push(ProductPair { a, phi: m });
        }
    }
    cands
        .iter()
        .filter(|p| {
            !cands
                .iter()
                .any(|q| pair_le(f, h, p, q) && !pair_le(f, h, q, p))
        })
        .cloned()
        .collect()
}

/// Partition of a pair list into equivalence classes under the mutual-<=
/// relation over `w`.
pub fn equiv_classes(f: &FusionSystem, w: usize, pairs: &[ProductPair]) -> Vec<Vec<usize>> {
    let mut class_of: Vec<Option<usize>> = vec![None; pairs.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..pairs.len() {
        if class_of[i].is_some() {
            continue;
        }
        let id = classes.len();
        let mut members = vec![i];
        class_of[i] = Some(id);
        for j in (i + 1)..pairs.len() {
            if class_of[j].is_none() && pair_equiv(f, w, &pairs[i], &pairs[j]) {
                class_of[j] = Some(id);
                members.push(j);
            }
        }
        classes.push(members);
    }
    classes
}

/// The canonical [H x_F K]: one minimal representative per equivalence class
/// of maximal pairs.
pub fn product_pairs(f: &FusionSystem, h: usize, k: usize) -> Result<ProductSet, String> {
    if !f.is_centric(h) || !f.is_centric(k) {
        return Err(format!("product requires centric objects, got ({h},{k})"));
    }
    let maximal = all_maximal_pairs(f, h, k);
    let classes = equiv_classes(f, h, &maximal);
    let mut pairs: Vec<ProductPair> = classes
        .into_iter()
        .map(|members| members.into_iter().map(|i| maximal[i].clone()).min().unwrap())
        .collect();
    pairs.sort();
    Ok(ProductSet { h, k, pairs })
}

/// Two pair lists are equal modulo the equivalence relation over `w`:
/// matched as multisets of equivalence classes.
pub fn equal_mod_equiv(f: &FusionSystem, w: usize, lhs: &[ProductPair], rhs: &[ProductPair]) -> bool {
    if lhs.len() != rhs.len() {
        return false;
    }
    let mut all: Vec<ProductPair> = lhs.to_vec();
    all.extend_from_slice(rhs);
    let classes = equiv_classes(f, w, &all);
    classes.into_iter().all(|members| {
        let from_lhs = members.iter().filter(|&&i| i < lhs.len()).count();
        2 * from_lhs == members.len()
    })
}

/// Verifies the universal property of [H x K]: every cone from a centric C
/// factors through exactly one pair by exactly one morphism.
pub fn check_universal_property(f: &FusionSystem, h: usize, k: usize) -> Result<(), String> {
    let set = product_pairs(f, h, k)?;
    for c in f.centric_objects() {
        for alpha in f.orbit_hom_set(c, h) {
            for beta in f.orbit_hom_set(c, k) {
                let mut factorizations = 0;
                for pair in &set.pairs {
                    let incl = f.orbit_incl(pair.a, h);
                    for gamma in f.orbit_hom_set(c, pair.a) {
                        if f.orbit_compose(&gamma, &incl) == alpha
                            && f.orbit_compose(&gamma, &pair.phi) == beta
                        {
                            factorizations += 1;
                        }
                    }
                }
                if factorizations != 1 {
                    return Err(format!(
                        "cone from {c} over ({h},{k}) has {factorizations} factorizations"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// One summand of a pullback in the additive completion.
#[derive(Clone, Debug)]
pub struct PullbackSummand {
    pub object: usize,
    pub to_h: OrbitMorphism,
    pub to_k: OrbitMorphism,
}

/// Pullback of H -> J <- K along inclusions, H, K <= J all centric.
pub fn pullback(f: &FusionSystem, h: usize, k: usize, j: usize) -> Result<Vec<PullbackSummand>, String> {
    let u = &f.universe;
    if !u.is_subobject(h, j) || !u.is_subobject(k, j) {
        return Err("pullback requires H, K <= J".to_string());
    }
    if !(f.is_centric(h) && f.is_centric(k) && f.is_centric(j)) {
        return Err("pullback requires centric objects".to_string());
    }
    let mut out = Vec::new();
    for x in double_cosets_within(f, j, h, k) {
        let hx = u.s.conj_subgroup(u.s.inv(x), u.object(h));
        let inter = intersect_sorted(&hx, u.object(k));
        let obj = u.object_id(&inter);
        if !f.is_centric(obj) {
            continue;
        }
        // projection to H is conjugation by x, to K the inclusion
        let table: HomTable = inter.iter().map(|&y| u.s.conj(x, y)).collect();
        out.push(PullbackSummand {
            object: obj,
            to_h: f.orbit_canonical(obj, h, &table),
            to_k: f.orbit_incl(obj, k),
        });
    }
    Ok(out)
}

/// Representatives of A \ W / B inside the object `w`, minimal in each coset.
pub fn double_cosets_within(f: &FusionSystem, w: usize, a: usize, b: usize) -> Vec<u16> {
    let u = &f.universe;
    let w_elems = u.object(w);
    let a_elems = u.object(a);
    let b_elems = u.object(b);
    let mut covered: Vec<u16> = Vec::new();
    let mut reps = Vec::new();
    for &x in w_elems {
        if covered.binary_search(&x).is_ok() {
            continue;
        }
        reps.push(x);
        for &p in a_elems {
            let px = u.s.mul(p, x);
            for &q in b_elems {
                let y = u.s.mul(px, q);
                if let Err(pos) = covered.binary_search(&y) {
                    covered.insert(pos, y);
                }
            }
        }
    }
    reps
}

/// The seven rewrite identities of the product sets.
#[derive(Clone, Debug)]
pub enum Rewrite {
    /// [K x H] from [H x K].
    Swap { h: usize, k: usize },
    /// [H x K] via double cosets, valid only when all morphisms are inner.
    SelfS { h: usize, k: usize },
    /// [H x psi(K)] from [H x K] for an isomorphism psi out of K.
    IsoRight { h: usize, k: usize, psi: HomTable },
    /// [psi(H) x K] from [H x K] for an isomorphism psi out of H.
    IsoLeft { h: usize, k: usize, psi: HomTable },
    /// [H x J] from [H x K] for J <= K.
    PullbackRight { h: usize, k: usize, j: usize },
    /// [J x K] from [H x K] for J <= H.
    PullbackLeft { h: usize, k: usize, j: usize },
    /// The two decompositions of the triple product J x H x K agree.
    Triple { h: usize, k: usize, j: usize },
}

/// Computes the right-hand-side pair set of the chosen identity.
pub fn rewrite_product(f: &FusionSystem, rw: &Rewrite) -> Result<Vec<ProductPair>, String> {
    let u = &f.universe;
    match rw {
        Rewrite::Swap { h, k } => {
            let base = product_pairs(f, *h, *k)?;
            Ok(base
                .pairs
                .iter()
                .map(|p| {
                    let (im, inv) = u.invert_iso(p.a, &p.phi.rep);
                    ProductPair {
                        a: im,
                        phi: f.orbit_canonical(im, *h, &inv),
                    }
                })
                .collect())
        }
        Rewrite::SelfS { h, k } => {
            if !is_inner_system(f) {
                return Err("selfS applies only to systems of inner conjugations".to_string());
            }
            let mut out = Vec::new();
            for x in double_cosets_within(f, f.top, *k, *h) {
                let kx = u.s.conj_subgroup(u.s.inv(x), u.object(*k));
                let inter = intersect_sorted(&kx, u.object(*h));
                let obj = u.object_id(&inter);
                if !f.is_centric(obj) {
                    continue;
                }
                let table: HomTable = inter.iter().map(|&y| u.s.conj(x, y)).collect();
                out.push(ProductPair {
                    a: obj,
                    phi: f.orbit_canonical(obj, *k, &table),
                });
            }
            Ok(out)
        }
        Rewrite::IsoRight { h, k, psi } => {
            let (psik, _) = u.invert_iso(*k, psi);
            let base = product_pairs(f, *h, *k)?;
            if !f.contains_table(*k, psik, psi) {
                return Err("psi is not a morphism of the system".to_string());
            }
            Ok(base
                .pairs
                .iter()
                .map(|p| {
                    let t = u.compose_tables(p.a, &p.phi.rep, *k, psi);
                    ProductPair {
                        a: p.a,
                        phi: f.orbit_canonical(p.a, psik, &t),
                    }
                })
                .collect())
        }
        Rewrite::IsoLeft { h, k, psi } => {
            let (psih, psi_inv) = u.invert_iso(*h, psi);
            if !f.contains_table(*h, psih, psi) {
                return Err("psi is not a morphism of the system".to_string());
            }
            let base = product_pairs(f, *h, *k)?;
            Ok(base
                .pairs
                .iter()
                .map(|p| {
                    // psi(A), and phi . psi^{-1} restricted to psi(A)
                    let a_elems = u.object(p.a);
                    let h_elems = u.object(*h);
                    let psi_a: Vec<u16> = {
                        let mut v: Vec<u16> = a_elems
                            .iter()
                            .map(|&x| psi[h_elems.binary_search(&x).unwrap()])
                            .collect();
                        v.sort_unstable();
                        v
                    };
                    let pa = u.object_id(&psi_a);
                    let table: HomTable = psi_a
                        .iter()
                        .map(|y| {
                            let pos = u.object(psih).binary_search(y).unwrap();
                            let back = psi_inv[pos]; // in A
                            p.phi.rep[a_elems.binary_search(&back).unwrap()]
                        })
                        .collect();
                    ProductPair {
                        a: pa,
                        phi: f.orbit_canonical(pa, *k, &table),
                    }
                })
                .collect())
        }
        Rewrite::PullbackRight { h, k, j } => {
            if !u.is_subobject(*j, *k) {
                return Err("pullback_right requires J <= K".to_string());
            }
            let base = product_pairs(f, *h, *k)?;
            let mut out = Vec::new();
            for p in &base.pairs {
                let (im, inv) = u.invert_iso(p.a, &p.phi.rep);
                for x in double_cosets_within(f, *k, *j, im) {
                    let jx = u.s.conj_subgroup(u.s.inv(x), u.object(*j));
                    let inter = intersect_sorted(&jx, u.object(im));
                    let inter_id = u.object_id(&inter);
                    if !f.is_centric(inter_id) {
                        continue;
                    }
                    // A' = phi^{-1}(J^x cap phi(A)), morphism iota c_x phi
                    let a_prime: Vec<u16> = {
                        let mut v: Vec<u16> = inter
                            .iter()
                            .map(|y| inv[u.object(im).binary_search(y).unwrap()])
                            .collect();
                        v.sort_unstable();
                        v
                    };
                    let ap = u.object_id(&a_prime);
                    let table: HomTable = a_prime
                        .iter()
                        .map(|&z| {
                            let img = p.phi.rep[u.object(p.a).binary_search(&z).unwrap()];
                            u.s.conj(x, img)
                        })
                        .collect();
                    out.push(ProductPair {
                        a: ap,
                        phi: f.orbit_canonical(ap, *j, &table),
                    });
                }
            }
            Ok(out)
        }
        Rewrite::PullbackLeft { h, k, j } => {
            if !u.is_subobject(*j, *h) {
                return Err("pullback_left requires J <= H".to_string());
            }
            let base = product_pairs(f, *h, *k)?;
            let mut out = Vec::new();
            for p in &base.pairs {
                for x in double_cosets_within(f, *h, p.a, *j) {
                    let ax = u.s.conj_subgroup(u.s.inv(x), u.object(p.a));
                    let inter = intersect_sorted(&ax, u.object(*j));
                    let b = u.object_id(&inter);
                    if !f.is_centric(b) {
                        continue;
                    }
                    // phi . iota . c_x : A^x cap J -> K
                    let table: HomTable = inter
                        .iter()
                        .map(|&y| {
                            let in_a = u.s.conj(x, y);
                            p.phi.rep[u.object(p.a).binary_search(&in_a).unwrap()]
                        })
                        .collect();
                    out.push(ProductPair {
                        a: b,
                        phi: f.orbit_canonical(b, *k, &table),
                    });
                }
            }
            Ok(out)
        }
        Rewrite::Triple { h, k, j } => {
            // RHS form: over [J x H] and [J x K], pullback inside J.
            let jh = product_pairs(f, *j, *h)?;
            let jk = product_pairs(f, *j, *k)?;
            let mut out = Vec::new();
            for (c, theta) in jh.pairs.iter().map(|p| (p.a, &p.phi)) {
                for (d, _gamma) in jk.pairs.iter().map(|p| (p.a, &p.phi)) {
                    for x in double_cosets_within(f, *j, d, c) {
                        let dx = u.s.conj_subgroup(u.s.inv(x), u.object(d));
                        let inter = intersect_sorted(&dx, u.object(c));
                        let e = u.object_id(&inter);
                        if !f.is_centric(e) {
                            continue;
                        }
                        let table = u.restrict_table(c, &theta.rep, e);
                        out.push(ProductPair {
                            a: e,
                            phi: f.orbit_canonical(e, *h, &table),
                        });
                    }
                }
            }
            Ok(out)
        }
    }
}

/// The left-hand-side pair set the rewrite must match, and the ambient object
/// over which equivalence is taken.
pub fn rewrite_lhs(f: &FusionSystem, rw: &Rewrite) -> Result<(usize, usize, Vec<ProductPair>), String> {
    let u = &f.universe;
    Ok(match rw {
        Rewrite::Swap { h, k } => (*k, *h, product_pairs(f, *k, *h)?.pairs),
        Rewrite::SelfS { h, k } => (*h, *k, product_pairs(f, *h, *k)?.pairs),
        Rewrite::IsoRight { h, k, psi } => {
            let (psik, _) = u.invert_iso(*k, psi);
            (*h, psik, product_pairs(f, *h, psik)?.pairs)
        }
        Rewrite::IsoLeft { h, k, psi } => {
            let (psih, _) = u.invert_iso(*h, psi);
            (psih, *k, product_pairs(f, psih, *k)?.pairs)
        }
        Rewrite::PullbackRight { h, j, .. } => (*h, *j, product_pairs(f, *h, *j)?.pairs),
        Rewrite::PullbackLeft { k, j, .. } => (*j, *k, product_pairs(f, *j, *k)?.pairs),
        Rewrite::Triple { h, k, j } => {
            // LHS form: over [H x K] then [J x A], included into H.
            let hk = product_pairs(f, *h, *k)?;
            let mut out = Vec::new();
            for p in &hk.pairs {
                let ja = product_pairs(f, *j, p.a)?;
                for q in &ja.pairs {
                    let t = q.phi.rep.clone(); // values already in A <= H
                    out.push(ProductPair {
                        a: q.a,
                        phi: f.orbit_canonical(q.a, *h, &t),
                    });
                }
            }
            (*j, *h, out)
        }
    })
}

/// Asserts one rewrite identity: RHS equals LHS modulo the equivalence.
pub fn verify_rewrite(f: &FusionSystem, rw: &Rewrite) -> Result<(), String> {
    let rhs = rewrite_product(f, rw)?;
    let (w, _target, lhs) = rewrite_lhs(f, rw)?;
    if equal_mod_equiv(f, w, &lhs, &rhs) {
        Ok(())
    } else {
        Err(format!("rewrite {rw:?} mismatch: lhs {} pairs, rhs {} pairs", lhs.len(), rhs.len()))
    }
}

pub fn is_inner_system(f: &FusionSystem) -> bool {
    let u = &f.universe;
    for a in f.objects() {
        for b in f.objects() {
            for t in f.hom_set(a, b) {
                let inner = u
                    .object(f.top)
                    .iter()
                    .any(|&g| &u.conj_table(g, a) == t);
                if !inner {
                    return false;
                }
            }
        }
    }
    true
}

/// Context for the normalizer machinery at a fully normalized centric H.
pub struct NormalizerContext<'a> {
    pub f: &'a FusionSystem,
    pub h: usize,
    /// N_S(H) as an object id.
    pub ns: usize,
    /// The normalizer system N_F(H) over N_S(H).
    pub nf: FusionSystem,
}

/// The data of the normalizer-after/before construction for one morphism.
#[derive(Clone, Debug)]
pub struct NfNormalizerData {
    pub src: usize,
    pub dst: usize,
    pub phi: HomTable,
    /// The normalizer after phi in N_F, a subgroup of N_K(phi(A)).
    pub after: usize,
    /// A', fully N_F-normalized source of the N_F-top.
    pub top_src: usize,
    /// phi^{N_F} = phi . theta : A' -> K.
    pub top: HomTable,
    /// The normalizer before phi^{N_F}, a subgroup of N_{N_S}(A').
    pub before: usize,
}

impl<'a> NormalizerContext<'a> {
    pub fn new(f: &'a FusionSystem, h: usize) -> Result<NormalizerContext<'a>, String> {
        if !f.is_centric(h) {
            return Err(format!("object {h} is not centric"));
        }
        let nf = f.normalizer_system(h)?;
        let ns = nf.top;
        Ok(NormalizerContext { f, h, ns, nf })
    }

    /// ^{N_F}_phi N = { x in N_K(phi(A)) : phi^{-1} c_x phi in Aut_{N_F}(A) }.
    pub fn after_normalizer(&self, a: usize, k: usize, phi: &HomTable) -> usize {
        let u = &self.f.universe;
        let image = u.table_image(phi);
        let im_id = u.object_id(&image);
        let nk = u.normalizer_in(k, im_id);
        let a_elems = u.object(a);
        let elems: Vec<u16> = u
            .object(nk)
            .iter()
            .copied()
            .filter(|&x| {
                let conj_back: HomTable = a_elems
                    .iter()
                    .enumerate()
                    .map(|(i, _)| {
                        let y = u.s.conj(x, phi[i]);
                        let pos = phi.iter().position(|&z| z == y).unwrap();
                        a_elems[pos]
                    })
                    .collect();
                self.nf.contains_table(a, a, &conj_back)
            })
            .collect();
        u.object_id(&elems)
    }

    /// Is phi its own N_F-top? (source fully N_F-normalized and the after-
    /// normalizer pulls back into Aut_{N_S}.)
    pub fn is_nf_top(&self, a: usize, k: usize, phi: &HomTable) -> bool {
        if !self.nf.is_fully_normalized(a) {
            return false;
        }
        let after = self.after_normalizer(a, k, phi);
        self.pulled_back_auts(a, phi, after)
            .into_iter()
            .all(|t| self.nf.inner_aut_tables(a).contains(&t))
    }

    /// { phi^{-1} c_x phi : x in after } as tables on A.
    fn pulled_back_auts(&self, a: usize, phi: &HomTable, after: usize) -> Vec<HomTable> {
        let u = &self.f.universe;
        let a_elems = u.object(a);
        let mut out: Vec<HomTable> = Vec::new();
        for &x in u.object(after) {
            let t: HomTable = a_elems
                .iter()
                .enumerate()
                .map(|(i, _)| {
                    let y = u.s.conj(x, phi[i]);
                    let pos = phi.iter().position(|&z| z == y).unwrap();
                    a_elems[pos]
                })
                .collect();
            if !out.contains(&t) {
                out.push(t);
            }
        }
        out.sort();
        out
    }

    /// Full normalizer-after/before data for phi : A -> K with A <= N_S.
    pub fn nf_data(&self, a: usize, k: usize, phi: &HomTable) -> Result<NfNormalizerData, String> {
        let u = &self.f.universe;
        let after = self.after_normalizer(a, k, phi);
        for a2 in self.nf.iso_class(a) {
            if !self.nf.is_fully_normalized(a2) {
                continue;
            }
            for theta in self.nf.hom_set(a2, a) {
                if u.table_image(theta) != u.object(a) {
                    continue;
                }
                let top = u.compose_tables(a2, theta, a, phi);
                let pulled = self.pulled_back_auts(a2, &top, after);
                let inner = self.nf.inner_aut_tables(a2);
                if !pulled.iter().all(|t| inner.contains(t)) {
                    continue;
                }
                let before = self.before_normalizer(a2, &top, after);
                // Invariant: Aut_after(phi A) = ^{top} Aut_before(A').
                let recovered: Vec<HomTable> = {
                    let mut v: Vec<HomTable> = u
                        .object(before)
                        .iter()
                        .map(|&x| u.conj_table(x, a2))
                        .collect();
                    v.sort();
                    v.dedup();
                    v
                };
                let mut pulled_sorted = pulled.clone();
                pulled_sorted.dedup();
                if recovered != pulled_sorted {
                    return Err("normalizer-before does not match the after-normalizer".to_string());
                }
                return Ok(NfNormalizerData {
                    src: a,
                    dst: k,
                    phi: phi.clone(),
                    after,
                    top_src: a2,
                    top,
                    before,
                });
            }
        }
        Err("no N_F-top found: input system is not saturated".to_string())
    }

    /// N_{phi}^{N_F} = { x in N_{N_S}(A') : c_x in Aut_after(phi A)^{phi} }.
    fn before_normalizer(&self, a2: usize, top: &HomTable, after: usize) -> usize {
        let u = &self.f.universe;
        let pulled = self.pulled_back_auts(a2, top, after);
        let n = u.normalizer_in(self.ns, a2);
        let elems: Vec<u16> = u
            .object(n)
            .iter()
            .copied()
            .filter(|&x| pulled.contains(&u.conj_table(x, a2)))
            .collect();
        u.object_id(&elems)
    }

    /// [N_F x K]: one representative per N_F-isomorphism class of [H x K],
    /// chosen fully N_F-normalized with phi equal to its own N_F-top.
    pub fn nf_product_pairs(&self, k: usize, prefer_max: bool) -> Result<Vec<ProductPair>, String> {
        let f = self.f;
        let maximal = all_maximal_pairs(f, self.h, k);
        let eq = equiv_classes(f, self.h, &maximal);
        // Group the eq-classes under the N_F-isomorphism relation.
        let nclasses = eq.len();
        let mut parent: Vec<usize> = (0..nclasses).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for i in 0..nclasses {
            for j in (i + 1)..nclasses {
                let related = eq[i].iter().any(|&pi| {
                    eq[j].iter().any(|&pj| self.nf_related(&maximal[pi], &maximal[pj]))
                });
                if related {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..nclasses {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().extend(eq[i].iter().copied());
        }
        let mut out = Vec::new();
        for (_, members) in groups {
            let mut suitable: Vec<ProductPair> = members
                .iter()
                .map(|&i| maximal[i].clone())
                .filter(|p| self.is_nf_top(p.a, k, &p.phi.rep))
                .collect();
            if suitable.is_empty() {
                return Err("no fully normalized N_F-top representative: non-saturated input".to_string());
            }
            suitable.sort();
            out.push(if prefer_max {
                suitable.pop().unwrap()
            } else {
                suitable.remove(0)
            });
        }
        out.sort();
        Ok(out)
    }

    /// (A, phi) ~ (B, psi) via an N_F-isomorphism theta : A -> B with
    /// psi . theta = phi in the orbit category.
    fn nf_related(&self, p1: &ProductPair, p2: &ProductPair) -> bool {
        let f = self.f;
        let u = &f.universe;
        if u.object(p1.a).len() != u.object(p2.a).len() {
            return false;
        }
        for theta in self.nf.hom_set(p1.a, p2.a) {
            if u.table_image(theta) != u.object(p2.a) {
                continue;
            }
            let composite = u.compose_tables(p1.a, theta, p2.a, &p2.phi.rep);
            if f.orbit_canonical(p1.a, p1.phi.dst, &composite) == p1.phi {
                return true;
            }
        }
        false
    }

    /// The unique orbit morphism N_phi^{N_F} -> K extending phi, together with
    /// the normalizer-before object it is defined on.
    pub fn extend_to_normalizer(&self, pair: &ProductPair, k: usize) -> Result<(usize, OrbitMorphism), String> {
        let f = self.f;
        let u = &f.universe;
        let data = self.nf_data(pair.a, k, &pair.phi.rep)?;
        if data.top_src != pair.a {
            return Err("pair is not an N_F-top representative".to_string());
        }
        let w = data.before;
        let mut found: Vec<OrbitMorphism> = Vec::new();
        let mut exact_image_checked = false;
        for ext in f.hom_set(w, k) {
            let r = u.restrict_table(w, ext, pair.a);
            if r == pair.phi.rep {
                // Image of an exact extension equals the after-normalizer.
                let im = u.object_id(&u.table_image(ext));
                if im != data.after {
                    return Err("extension image differs from the after-normalizer".to_string());
                }
                exact_image_checked = true;
            }
            if f.orbit_canonical(pair.a, k, &r) == pair.phi {
                let m = f.orbit_canonical(w, k, ext);
                if !found.contains(&m) {
                    found.push(m);
                }
            }
        }
        if found.len() != 1 || !exact_image_checked {
            return Err(format!(
                "extension not unique or missing: found {} orbit classes",
                found.len()
            ));
        }
        Ok((w, found.remove(0)))
    }

    /// Theorem: [H x_F K] decomposes as the disjoint union over [N_F x K] of
    /// the lifted N_F-products hat-phi . [H x_{N_F} N_phi^{N_F}]. Returns the
    /// blocks and verifies disjointness and exhaustiveness.
    pub fn decompose_product(&self, k: usize, prefer_max: bool) -> Result<ProductDecomposition, String> {
        let f = self.f;
        let nf_pairs = self.nf_product_pairs(k, prefer_max)?;
        let mut blocks = Vec::new();
        for pair in &nf_pairs {
            let (w, hat) = self.extend_to_normalizer(pair, k)?;
            if !self.nf.is_centric(self.h) || !self.nf.is_centric(w) {
                return Err("normalizer product requires N_F-centric objects".to_string());
            }
            let sub = product_pairs(&self.nf, self.h, w)?;
            let lifted: Vec<ProductPair> = sub
                .pairs
                .iter()
                .map(|q| {
                    let t = f.universe.compose_tables(q.a, &q.phi.rep, w, &hat.rep);
                    ProductPair {
                        a: q.a,
                        phi: f.orbit_canonical(q.a, k, &t),
                    }
                })
                .collect();
            blocks.push(DecompositionBlock {
                nf_pair: pair.clone(),
                before: w,
                extension: hat,
                lifted,
            });
        }
        // Verification: the union of blocks is a valid [H x K] modulo the
        // equivalence: each lifted pair matches exactly one canonical class,
        // and each class is hit exactly once.
        let canonical = product_pairs(f, self.h, k)?;
        let mut hits = vec![0usize; canonical.pairs.len()];
        for b in &blocks {
            for p in &b.lifted {
                let matches: Vec<usize> = canonical
                    .pairs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| pair_equiv(f, self.h, p, c))
                    .map(|(i, _)| i)
                    .collect();
                if matches.len() != 1 {
                    return Err(format!(
                        "lifted pair matches {} canonical classes",
                        matches.len()
                    ));
                }
                hits[matches[0]] += 1;
            }
        }
        if !hits.iter().all(|&c| c == 1) {
            return Err("blocks do not partition [H x K]".to_string());
        }
        Ok(ProductDecomposition {
            h: self.h,
            k,
            blocks,
        })
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionBlock {
    pub nf_pair: ProductPair,
    pub before: usize,
    pub extension: OrbitMorphism,
    pub lifted: Vec<ProductPair>,
}

#[derive(Clone, Debug)]
pub struct ProductDecomposition {
    pub h: usize,
    pub k: usize,
    pub blocks: Vec<DecompositionBlock>,
}
