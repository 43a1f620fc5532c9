//! Exact finite-group engine on explicit permutation representations.
//!
//! Groups are fully enumerated; the canonical total order on elements is the
//! lexicographic order on permutation images. Every "any choice" set in the
//! constructions downstream is made deterministic through this order.

use crate::perm::Perm;
use std::collections::HashMap;
use std::sync::Arc;

/// Default cap on group order; construction fails loudly above it.
pub const DESK_SCALE_BOUND: usize = 10_000;

/// Reads the configurable desk-scale bound (`FUSCOMP_MAX_GROUP` overrides).
pub fn desk_scale_bound() -> usize {
    std::env::var("FUSCOMP_MAX_GROUP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DESK_SCALE_BOUND)
}

/// A fully enumerated permutation group. Elements are sorted lexicographically
/// by image vector and addressed by their index in that order.
#[derive(Debug)]
pub struct FiniteGroup {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, u16>,
    mul_table: Vec<u16>,
    inv_table: Vec<u16>,
    identity: u16,
}

impl FiniteGroup {
    /// Enumerates the closure of the generators. Fails if any generator is not
    /// a bijection of the stated degree or if the order exceeds `bound`.
    pub fn generate(name: &str, degree: usize, generators: Vec<Perm>, bound: usize) -> Result<Arc<FiniteGroup>, String> {
        for (i, g) in generators.iter().enumerate() {
            if g.degree() != degree {
                return Err(format!("generator {i} has degree {} != {degree}", g.degree()));
            }
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        seen.insert(id, ());
        let mut frontier = 0;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            frontier += 1;
            for g in &generators {
                let next = g.compose(&current);
                if !seen.contains_key(&next) {
                    if elements.len() >= bound {
                        return Err(format!(
                            "group '{name}' exceeds the desk-scale bound of {bound} elements"
                        ));
                    }
                    seen.insert(next.clone(), ());
                    elements.push(next);
                }
            }
        }
        elements.sort();
        let n = elements.len();
        let index: HashMap<Perm, u16> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u16))
            .collect();
        let mut mul_table = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                mul_table[i * n + j] = index[&elements[i].compose(&elements[j])];
            }
        }
        let mut inv_table = vec![0u16; n];
        for i in 0..n {
            inv_table[i] = index[&elements[i].inverse()];
        }
        let identity = index[&Perm::identity(degree)];
        Ok(Arc::new(FiniteGroup {
            name: name.to_string(),
            degree,
            generators,
            elements,
            index,
            mul_table,
            inv_table,
            identity,
        }))
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elem(&self, i: u16) -> &Perm {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, p: &Perm) -> Option<u16> {
        self.index.get(p).copied()
    }

    pub fn identity(&self) -> u16 {
        self.identity
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul_table[a as usize * self.elements.len() + b as usize]
    }

    pub fn inv(&self, a: u16) -> u16 {
        self.inv_table[a as usize]
    }

    /// `g x g^{-1}`.
    pub fn conj(&self, g: u16, x: u16) -> u16 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: u16) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Closure of a set of element indices, as a sorted index list.
    pub fn closure(&self, seed: &[u16]) -> Vec<u16> {
        let mut members = vec![false; self.order()];
        members[self.identity as usize] = true;
        let mut list = vec![self.identity];
        let mut frontier = 0;
        let gens: Vec<u16> = seed.to_vec();
        for &g in &gens {
            if !members[g as usize] {
                members[g as usize] = true;
                list.push(g);
            }
        }
        while frontier < list.len() {
            let x = list[frontier];
            frontier += 1;
            for &g in &gens {
                let y = self.mul(g, x);
                if !members[y as usize] {
                    members[y as usize] = true;
                    list.push(y);
                }
            }
        }
        list.sort_unstable();
        list
    }

    /// All subgroups, deduplicated, sorted by (order, element list); plus the
    /// conjugacy classes as orbits of subgroup indices.
    pub fn subgroup_lattice(&self) -> SubgroupLattice {
        let trivial = vec![self.identity];
        let mut found: Vec<Vec<u16>> = vec![trivial];
        let mut seen: HashMap<Vec<u16>, ()> = HashMap::new();
        seen.insert(found[0].clone(), ());
        let mut frontier = 0;
        while frontier < found.len() {
            let base = found[frontier].clone();
            frontier += 1;
            if base.len() == self.order() {
                continue;
            }
            for g in 0..self.order() as u16 {
                if base.binary_search(&g).is_ok() {
                    continue;
                }
                let mut seed = base.clone();
                seed.push(g);
                let sub = self.closure(&seed);
                if !seen.contains_key(&sub) {
                    seen.insert(sub.clone(), ());
                    found.push(sub);
                }
            }
        }
        found.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let key_of: HashMap<Vec<u16>, usize> =
            found.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut class_of = vec![usize::MAX; found.len()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..found.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let mut orbit = Vec::new();
            for g in 0..self.order() as u16 {
                let conj: Vec<u16> = {
                    let mut v: Vec<u16> = found[i].iter().map(|&x| self.conj(g, x)).collect();
                    v.sort_unstable();
                    v
                };
                let j = key_of[&conj];
                if class_of[j] == usize::MAX {
                    class_of[j] = classes.len();
                    orbit.push(j);
                }
            }
            orbit.sort_unstable();
            classes.push(orbit);
        }
        SubgroupLattice {
            subgroups: found,
            classes,
            class_of,
        }
    }

    /// One representative per double coset `K x H`, each the minimal element of
    /// its coset in the canonical order.
    pub fn double_coset_reps(&self, k: &[u16], h: &[u16]) -> Vec<u16> {
        let mut covered = vec![false; self.order()];
        let mut reps = Vec::new();
        for x in 0..self.order() as u16 {
            if covered[x as usize] {
                continue;
            }
            reps.push(x);
            for &a in k {
                let ax = self.mul(a, x);
                for &b in h {
                    covered[self.mul(ax, b) as usize] = true;
                }
            }
        }
        reps
    }

    pub fn normalizer(&self, h: &[u16]) -> Vec<u16> {
        (0..self.order() as u16)
            .filter(|&g| {
                h.iter().all(|&x| h.binary_search(&self.conj(g, x)).is_ok())
            })
            .collect()
    }

    pub fn centralizer(&self, h: &[u16]) -> Vec<u16> {
        (0..self.order() as u16)
            .filter(|&g| h.iter().all(|&x| self.mul(g, x) == self.mul(x, g)))
            .collect()
    }

    pub fn center(&self) -> Vec<u16> {
        let all: Vec<u16> = (0..self.order() as u16).collect();
        self.centralizer(&all)
    }

    /// A Sylow p-subgroup, grown deterministically through normalizers.
    pub fn sylow_subgroup(&self, p: usize) -> Result<Vec<u16>, String> {
        if p < 2 || !is_prime(p) {
            return Err(format!("{p} is not prime"));
        }
        let mut target = 1usize;
        let mut n = self.order();
        while n % p == 0 {
            target *= p;
            n /= p;
        }
        let mut current = vec![self.identity];
        while current.len() < target {
            let normalizer = self.normalizer(&current);
            let mut grown = false;
            for &g in &normalizer {
                if current.binary_search(&g).is_ok() {
                    continue;
                }
                if !self.element_order(g).is_power_of(p) {
                    continue;
                }
                let mut seed = current.clone();
                seed.push(g);
                let candidate = self.closure(&seed);
                if candidate.len().is_power_of(p) && candidate.len() > current.len() {
                    current = candidate;
                    grown = true;
                    break;
                }
            }
            if !grown {
                return Err("sylow growth stalled (internal error)".to_string());
            }
        }
        Ok(current)
    }

    /// Brute-force isomorphism test through generator-image search. Intended
    /// for the desk-scale orders that appear in the worked examples.
    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        if self.order() != other.order() {
            return false;
        }
        // Greedy generating sequence for self.
        let mut gens: Vec<u16> = Vec::new();
        let mut span = self.closure(&gens);
        while span.len() < self.order() {
            let g = (0..self.order() as u16)
                .find(|g| span.binary_search(g).is_err())
                .unwrap();
            gens.push(g);
            span = self.closure(&gens);
        }
        let orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let mut images = Vec::new();
        search_iso(self, other, &gens, &orders, &mut images)
    }

    /// The image of `sub` under conjugation by `g`, sorted.
    pub fn conj_subgroup(&self, g: u16, sub: &[u16]) -> Vec<u16> {
        let mut v: Vec<u16> = sub.iter().map(|&x| self.conj(g, x)).collect();
        v.sort_unstable();
        v
    }
}

fn search_iso(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[u16],
    orders: &[usize],
    images: &mut Vec<u16>,
) -> bool {
    if images.len() == gens.len() {
        return check_hom_bijective(g, h, gens, images);
    }
    let k = images.len();
    for cand in 0..h.order() as u16 {
        if h.element_order(cand) != orders[k] {
            continue;
        }
        images.push(cand);
        if search_iso(g, h, gens, orders, images) {
            return true;
        }
        images.pop();
    }
    false
}

fn check_hom_bijective(g: &FiniteGroup, h: &FiniteGroup, gens: &[u16], images: &[u16]) -> bool {
    // BFS over g's Cayley graph, carrying the candidate image of each element.
    let n = g.order();
    let mut image = vec![u16::MAX; n];
    image[g.identity() as usize] = h.identity();
    let mut queue = vec![g.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (i, &gen) in gens.iter().enumerate() {
            let y = g.mul(gen, x);
            let fy = h.mul(images[i], image[x as usize]);
            if image[y as usize] == u16::MAX {
                image[y as usize] = fy;
                queue.push(y);
            } else if image[y as usize] != fy {
                return false;
            }
        }
    }
    // Multiplicativity on all pairs, then bijectivity by pigeonhole.
    let mut hit = vec![false; n];
    for x in 0..n as u16 {
        let fx = image[x as usize];
        if hit[fx as usize] {
            return false;
        }
        hit[fx as usize] = true;
    }
    for x in 0..n as u16 {
        for y in 0..n as u16 {
            if image[g.mul(x, y) as usize] != h.mul(image[x as usize], image[y as usize]) {
                return false;
            }
        }
    }
    true
}

/// The deduplicated subgroup list of a group with its conjugacy classes.
#[derive(Debug)]
pub struct SubgroupLattice {
    /// Sorted by (order, element list); index here is the canonical id.
    pub subgroups: Vec<Vec<u16>>,
    /// Conjugacy orbits of subgroup ids, each sorted, ordered by least member.
    pub classes: Vec<Vec<usize>>,
    /// Class index of each subgroup.
    pub class_of: Vec<usize>,
}

impl SubgroupLattice {
    pub fn id_of(&self, elems: &[u16]) -> Option<usize> {
        self.subgroups.binary_search_by(|s| (s.len(), s.as_slice()).cmp(&(elems.len(), elems))).ok()
    }
}

pub(crate) trait PowerOf {
    fn is_power_of(&self, p: usize) -> bool;
}

impl PowerOf for usize {
    fn is_power_of(&self, p: usize) -> bool {
        let mut n = *self;
        if n == 0 {
            return false;
        }
        while n % p == 0 {
            n /= p;
        }
        n == 1
    }
}

pub fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Intersection of two sorted element lists.
pub fn intersect_sorted(a: &[u16], b: &[u16]) -> Vec<u16> {
    a.iter().filter(|x| b.binary_search(x).is_ok()).copied().collect()
}

/// Is `a` (sorted) contained in `b` (sorted)?
pub fn subset_sorted(a: &[u16], b: &[u16]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}
