//! Finite groups stored as explicit multiplication tables.
//!
//! Every vertex and edge group of a graph of groups is one of these. Groups
//! are small (the default order cap is 48), so every predicate here is an
//! exhaustive scan over the table.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Default cap on group orders.
pub const DEFAULT_ORDER_CAP: usize = 48;

/// An element of a [`FiniteGroup`], as an index into its element list.
///
/// The identity is always index 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Elem(pub u32);

impl Elem {
    pub const IDENTITY: Elem = Elem(0);

    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group has no elements")]
    Empty,
    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderCap { order: usize, cap: usize },
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("malformed multiplication table: {0}")]
    BadTable(String),
    #[error("product is not associative: ({x}*{y})*{z} != {x}*({y}*{z})")]
    NotAssociative { x: String, y: String, z: String },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element `{0}` has no inverse")]
    NoInverse(String),
    #[error("not a homomorphism: image of {x}*{y} disagrees with the product of images")]
    NotHomomorphism { x: String, y: String },
    #[error("not injective: `{x}` and `{y}` have the same image")]
    NotInjective { x: String, y: String },
    #[error("the given images do not determine the map on `{0}` (generators do not generate)")]
    Undetermined(String),
    #[error("subgroups belong to different parent groups")]
    ParentMismatch,
    #[error("element list is not a subgroup: {0}")]
    NotSubgroup(String),
}

/// How a group was specified; kept so that graphs can be written back out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    /// Cyclic group of the given order with a named generator.
    Cyclic { order: usize, generator: String },
    /// Symmetric group on `1..=n`, elements in cycle notation.
    Symmetric(usize),
    /// Explicit Cayley table. `names[i]` is the i-th element, `rows[i][j]`
    /// names the product `names[i] * names[j]`.
    Table {
        names: Vec<String>,
        rows: Vec<Vec<String>>,
    },
}

/// A finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    spec: GroupSpec,
    names: Vec<String>,
    index: BTreeMap<String, Elem>,
    table: Vec<u32>,
    inverses: Vec<Elem>,
    /// All subgroups, as sorted member lists, sorted by (order, members).
    lattice: Vec<Vec<Elem>>,
    /// For each lattice entry, the index of the least lattice entry conjugate to it.
    conj_rep: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

impl FiniteGroup {
    /// Builds a group from a specification, verifying all axioms.
    pub fn new(name: &str, spec: GroupSpec, cap: usize) -> Result<Arc<FiniteGroup>, GroupError> {
        let (names, table) = match &spec {
            GroupSpec::Cyclic { order, generator } => cyclic_table(*order, generator, cap)?,
            GroupSpec::Symmetric(n) => symmetric_table(*n, cap)?,
            GroupSpec::Table { names, rows } => explicit_table(names, rows, cap)?,
        };
        Self::from_table(name, spec, names, table)
    }

    pub fn cyclic(
        name: &str,
        order: usize,
        generator: &str,
    ) -> Result<Arc<FiniteGroup>, GroupError> {
        Self::new(
            name,
            GroupSpec::Cyclic {
                order,
                generator: generator.to_string(),
            },
            DEFAULT_ORDER_CAP,
        )
    }

    pub fn symmetric(name: &str, n: usize) -> Result<Arc<FiniteGroup>, GroupError> {
        Self::new(name, GroupSpec::Symmetric(n), DEFAULT_ORDER_CAP)
    }

    /// Checks the group axioms on a raw table whose identity is element 0.
    fn from_table(
        name: &str,
        spec: GroupSpec,
        names: Vec<String>,
        table: Vec<u32>,
    ) -> Result<Arc<FiniteGroup>, GroupError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let mut index = BTreeMap::new();
        for (i, nm) in names.iter().enumerate() {
            if index.insert(nm.clone(), Elem(i as u32)).is_some() {
                return Err(GroupError::DuplicateName(nm.clone()));
            }
        }
        let mul = |a: usize, b: usize| table[a * n + b] as usize;
        for x in 0..n {
            if mul(0, x) != x || mul(x, 0) != x {
                return Err(GroupError::NoIdentity);
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = mul(x, y);
                for z in 0..n {
                    if mul(xy, z) != mul(x, mul(y, z)) {
                        return Err(GroupError::NotAssociative {
                            x: names[x].clone(),
                            y: names[y].clone(),
                            z: names[z].clone(),
                        });
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for (x, nm) in names.iter().enumerate() {
            match (0..n).find(|&y| mul(y, x) == 0 && mul(x, y) == 0) {
                Some(y) => inverses.push(Elem(y as u32)),
                None => return Err(GroupError::NoInverse(nm.clone())),
            }
        }
        let mut g = FiniteGroup {
            name: name.to_string(),
            spec,
            names,
            index,
            table,
            inverses,
            lattice: Vec::new(),
            conj_rep: Vec::new(),
        };
        g.lattice = g.compute_lattice();
        g.conj_rep = g.compute_conj_reps();
        Ok(Arc::new(g))
    }

    /// The subgroup `members` of `parent` as a group in its own right, with
    /// the parent's element names. Identity stays first.
    pub fn from_subgroup(name: &str, sub: &Subgroup) -> Arc<FiniteGroup> {
        let parent = sub.parent();
        let members = sub.members();
        let pos: BTreeMap<Elem, u32> = members
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as u32))
            .collect();
        let names: Vec<String> = members
            .iter()
            .map(|&e| parent.name_of(e).to_string())
            .collect();
        let mut table = Vec::with_capacity(members.len() * members.len());
        for &a in members {
            for &b in members {
                table.push(pos[&parent.mul(a, b)]);
            }
        }
        let rows = members
            .iter()
            .map(|&a| {
                members
                    .iter()
                    .map(|&b| parent.name_of(parent.mul(a, b)).to_string())
                    .collect()
            })
            .collect();
        let spec = GroupSpec::Table {
            names: names.clone(),
            rows,
        };
        Self::from_table(name, spec, names, table)
            .expect("a subgroup table satisfies the group axioms")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> Elem {
        Elem::IDENTITY
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order() as u32).map(Elem)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.table[a.idx() * self.order() + b.idx()])
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a.idx()]
    }

    pub fn conj(&self, x: Elem, a: Elem) -> Elem {
        self.mul(self.mul(x, a), self.inv(x))
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = Elem::IDENTITY;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn name_of(&self, a: Elem) -> &str {
        &self.names[a.idx()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    /// Resolves a product word such as `a^2`, `a*b`, `(12)*(13)` or `b^-1`.
    pub fn parse_word(&self, word: &str) -> Result<Elem, GroupError> {
        let word = word.trim();
        if let Some(e) = self.lookup(word) {
            return Ok(e);
        }
        let mut acc = Elem::IDENTITY;
        for factor in word.split('*') {
            let factor = factor.trim();
            let e = if let Some(e) = self.lookup(factor) {
                e
            } else if let Some((base, exp)) = factor.rsplit_once('^') {
                let b = self
                    .lookup(base)
                    .ok_or_else(|| GroupError::UnknownElement(factor.to_string()))?;
                let k: i64 = exp
                    .parse()
                    .map_err(|_| GroupError::UnknownElement(factor.to_string()))?;
                self.pow(b, k)
            } else {
                return Err(GroupError::UnknownElement(factor.to_string()));
            };
            acc = self.mul(acc, e);
        }
        Ok(acc)
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut k = 1;
        let mut x = a;
        while !x.is_identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// All subgroups, sorted by order then member list.
    pub fn subgroups(self: &Arc<Self>) -> Vec<Subgroup> {
        self.lattice
            .iter()
            .map(|m| Subgroup {
                parent: self.clone(),
                members: m.clone(),
            })
            .collect()
    }

    /// One subgroup per conjugacy class, in lattice order.
    pub fn subgroup_class_reps(self: &Arc<Self>) -> Vec<Subgroup> {
        self.lattice
            .iter()
            .enumerate()
            .filter(|(i, _)| self.conj_rep[*i] == *i)
            .map(|(_, m)| Subgroup {
                parent: self.clone(),
                members: m.clone(),
            })
            .collect()
    }

    /// Position of a member set in the subgroup lattice.
    pub fn lattice_index(&self, members: &[Elem]) -> Option<usize> {
        self.lattice
            .binary_search_by(|m| lattice_key(m).cmp(&lattice_key(members)))
            .ok()
    }

    /// Index of the conjugacy-class representative of a lattice entry.
    pub fn conjugacy_rep_index(&self, lattice_index: usize) -> usize {
        self.conj_rep[lattice_index]
    }

    pub fn lattice_members(&self, lattice_index: usize) -> &[Elem] {
        &self.lattice[lattice_index]
    }

    fn closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.order()];
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(Elem::IDENTITY);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y.idx()] {
                    seen[y.idx()] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order() as u32)
            .filter(|&i| seen[i as usize])
            .map(Elem)
            .collect()
    }

    fn compute_lattice(&self) -> Vec<Vec<Elem>> {
        // Every subgroup is a join of cyclic subgroups.
        let cyclic: BTreeSet<Vec<Elem>> = self.elements().map(|g| self.closure(&[g])).collect();
        let mut all: BTreeSet<Vec<Elem>> = cyclic.clone();
        let mut frontier: Vec<Vec<Elem>> = all.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.iter().all(|x| h.binary_search(x).is_ok()) {
                        continue;
                    }
                    let mut gens = h.clone();
                    gens.extend_from_slice(c);
                    let j = self.closure(&gens);
                    if all.insert(j.clone()) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Vec<Elem>> = all.into_iter().collect();
        out.sort_by(|a, b| lattice_key(a).cmp(&lattice_key(b)));
        out
    }

    fn compute_conj_reps(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.lattice.len()];
        for i in 0..self.lattice.len() {
            if reps[i] != usize::MAX {
                continue;
            }
            for x in self.elements() {
                let mut c: Vec<Elem> = self.lattice[i].iter().map(|&a| self.conj(x, a)).collect();
                c.sort();
                let j = self
                    .lattice_index(&c)
                    .expect("conjugate of a subgroup is a subgroup");
                if reps[j] == usize::MAX {
                    reps[j] = i;
                }
            }
        }
        reps
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut span = vec![Elem::IDENTITY];
        for x in self.elements() {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }
}

fn lattice_key(m: &[Elem]) -> (usize, &[Elem]) {
    (m.len(), m)
}

fn check_cap(order: usize, cap: usize) -> Result<(), GroupError> {
    if order == 0 {
        return Err(GroupError::Empty);
    }
    if order > cap {
        return Err(GroupError::OrderCap { order, cap });
    }
    Ok(())
}

fn cyclic_table(
    n: usize,
    generator: &str,
    cap: usize,
) -> Result<(Vec<String>, Vec<u32>), GroupError> {
    check_cap(n, cap)?;
    let names = (0..n)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => generator.to_string(),
            _ => format!("{generator}^{k}"),
        })
        .collect();
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            table.push(((i + j) % n) as u32);
        }
    }
    Ok((names, table))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Cycle notation for a permutation of `0..n` (printed 1-based), e.g. `(12)(34)`.
fn cycle_name(p: &[usize]) -> String {
    let n = p.len();
    let sep = if n >= 10 { "," } else { "" };
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cyc = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cyc.push(format!("{}", i + 1));
            i = p[i];
        }
        out.push('(');
        out.push_str(&cyc.join(sep));
        out.push(')');
    }
    if out.is_empty() {
        "1".to_string()
    } else {
        out
    }
}

fn symmetric_table(n: usize, cap: usize) -> Result<(Vec<String>, Vec<u32>), GroupError> {
    if n == 0 {
        return Err(GroupError::Empty);
    }
    // Cap before generating n! permutations.
    if n > 8 {
        return Err(GroupError::OrderCap {
            order: usize::MAX,
            cap,
        });
    }
    check_cap(factorial(n), cap)?;
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        perms.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    let pos: BTreeMap<Vec<usize>, u32> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i as u32))
        .collect();
    let m = perms.len();
    let mut table = Vec::with_capacity(m * m);
    for s in &perms {
        for t in &perms {
            // (s*t)(i) = s(t(i))
            let st: Vec<usize> = (0..n).map(|i| s[t[i]]).collect();
            table.push(pos[&st]);
        }
    }
    Ok((perms.iter().map(|p| cycle_name(p)).collect(), table))
}

fn explicit_table(
    names: &[String],
    rows: &[Vec<String>],
    cap: usize,
) -> Result<(Vec<String>, Vec<u32>), GroupError> {
    let n = names.len();
    check_cap(n, cap)?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(GroupError::BadTable(format!("expected a {n}x{n} table")));
    }
    let mut index = BTreeMap::new();
    for (i, nm) in names.iter().enumerate() {
        if index.insert(nm.as_str(), i).is_some() {
            return Err(GroupError::DuplicateName(nm.clone()));
        }
    }
    let mut raw = vec![0usize; n * n];
    for (i, row) in rows.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            raw[i * n + j] = *index
                .get(entry.as_str())
                .ok_or_else(|| GroupError::UnknownElement(entry.clone()))?;
        }
    }
    let id = (0..n)
        .find(|&e| (0..n).all(|x| raw[e * n + x] == x && raw[x * n + e] == x))
        .ok_or(GroupError::NoIdentity)?;
    // Reorder so the identity comes first.
    let mut order: Vec<usize> = (0..n).collect();
    order.remove(id);
    order.insert(0, id);
    let mut new_pos = vec![0u32; n];
    for (k, &old) in order.iter().enumerate() {
        new_pos[old] = k as u32;
    }
    let mut table = vec![0u32; n * n];
    for (a, &oa) in order.iter().enumerate() {
        for (b, &ob) in order.iter().enumerate() {
            table[a * n + b] = new_pos[raw[oa * n + ob]];
        }
    }
    Ok((order.iter().map(|&i| names[i].clone()).collect(), table))
}

/// A subgroup of a [`FiniteGroup`], stored as its sorted member list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<Elem>,
}

impl PartialOrd for FiniteGroup {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteGroup {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (&self.name, &self.names, &self.table).cmp(&(&other.name, &other.names, &other.table))
    }
}

impl Subgroup {
    /// Smallest subgroup containing `gens`.
    pub fn generated(parent: &Arc<FiniteGroup>, gens: &[Elem]) -> Subgroup {
        Subgroup {
            parent: parent.clone(),
            members: parent.closure(gens),
        }
    }

    /// Like [`Subgroup::generated`], but by element name.
    pub fn generated_by_names(
        parent: &Arc<FiniteGroup>,
        gens: &[&str],
    ) -> Result<Subgroup, GroupError> {
        let elems = gens
            .iter()
            .map(|g| {
                parent
                    .lookup(g)
                    .ok_or_else(|| GroupError::UnknownElement(g.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::generated(parent, &elems))
    }

    /// Checks closure of an explicit member set.
    pub fn from_members(
        parent: &Arc<FiniteGroup>,
        members: &[Elem],
    ) -> Result<Subgroup, GroupError> {
        let mut m = members.to_vec();
        m.sort();
        m.dedup();
        let s = Subgroup {
            parent: parent.clone(),
            members: m,
        };
        if !s.contains(Elem::IDENTITY) {
            return Err(GroupError::NotSubgroup("missing identity".into()));
        }
        for &a in &s.members {
            if !s.contains(parent.inv(a)) {
                return Err(GroupError::NotSubgroup(format!(
                    "not closed under inverse at {}",
                    parent.name_of(a)
                )));
            }
            for &b in &s.members {
                if !s.contains(parent.mul(a, b)) {
                    return Err(GroupError::NotSubgroup(format!(
                        "not closed under product at ({}, {})",
                        parent.name_of(a),
                        parent.name_of(b)
                    )));
                }
            }
        }
        Ok(s)
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Subgroup {
        Subgroup {
            parent: parent.clone(),
            members: vec![Elem::IDENTITY],
        }
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Subgroup {
        Subgroup {
            parent: parent.clone(),
            members: parent.elements().collect(),
        }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&e| other.contains(e))
    }

    pub fn same_parent(&self, other: &Subgroup) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) || *self.parent == *other.parent
    }

    /// `x * self * x^-1`.
    pub fn conjugate(&self, x: Elem) -> Subgroup {
        let mut m: Vec<Elem> = self
            .members
            .iter()
            .map(|&a| self.parent.conj(x, a))
            .collect();
        m.sort();
        Subgroup {
            parent: self.parent.clone(),
            members: m,
        }
    }

    /// Whether `x * self * x^-1` is contained in `other`.
    pub fn conjugate_within(&self, x: Elem, other: &Subgroup) -> bool {
        self.members
            .iter()
            .all(|&a| other.contains(self.parent.conj(x, a)))
    }

    /// The least element of the left coset `g * self`.
    pub fn coset_rep(&self, g: Elem) -> Elem {
        self.members
            .iter()
            .map(|&h| self.parent.mul(g, h))
            .min()
            .unwrap()
    }

    /// Least representatives of the left cosets, in increasing order.
    pub fn left_transversal(&self) -> Vec<Elem> {
        let reps: BTreeSet<Elem> = self.parent.elements().map(|g| self.coset_rep(g)).collect();
        reps.into_iter().collect()
    }

    /// Subgroup generated by the union of two subgroups.
    pub fn join(&self, other: &Subgroup) -> Result<Subgroup, GroupError> {
        if !self.same_parent(other) {
            return Err(GroupError::ParentMismatch);
        }
        let mut gens = self.members.clone();
        gens.extend_from_slice(&other.members);
        Ok(Subgroup::generated(&self.parent, &gens))
    }

    /// Generators chosen greedily from the member list.
    pub fn generators(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut span = vec![Elem::IDENTITY];
        for &x in &self.members {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.parent.closure(&gens);
            }
        }
        gens
    }

    /// Position in the parent's subgroup lattice.
    pub fn lattice_index(&self) -> usize {
        self.parent
            .lattice_index(&self.members)
            .expect("subgroup is in the lattice")
    }

    pub fn display(&self) -> String {
        let names: Vec<&str> = self
            .members
            .iter()
            .map(|&e| self.parent.name_of(e))
            .collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// Decides whether two subgroups are conjugate, returning a witness `w`
/// with `w * a * w^-1 = b`.
pub fn is_conjugate_subgroup(a: &Subgroup, b: &Subgroup) -> Result<Option<Elem>, GroupError> {
    if !a.same_parent(b) {
        return Err(GroupError::ParentMismatch);
    }
    if a.order() != b.order() {
        return Ok(None);
    }
    Ok(a.parent.elements().find(|&w| a.conjugate_within(w, b)))
}

/// A verified injective homomorphism between finite groups.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mono {
    domain: Arc<FiniteGroup>,
    codomain: Arc<FiniteGroup>,
    image_of: Vec<Elem>,
}

impl Mono {
    /// Extends `pairs` (given on generators or on every element)
    /// multiplicatively and verifies the result is an injective homomorphism.
    pub fn check(
        domain: &Arc<FiniteGroup>,
        codomain: &Arc<FiniteGroup>,
        pairs: &[(Elem, Elem)],
    ) -> Result<Mono, GroupError> {
        let n = domain.order();
        let mut image: Vec<Option<Elem>> = vec![None; n];
        image[0] = Some(Elem::IDENTITY);
        let mut gens: Vec<(Elem, Elem)> = Vec::new();
        for &(x, y) in pairs {
            if x.is_identity() && !y.is_identity() {
                return Err(GroupError::NotHomomorphism {
                    x: domain.name_of(x).to_string(),
                    y: domain.name_of(x).to_string(),
                });
            }
            if let Some((_, prev)) = gens.iter().find(|(g, _)| *g == x) {
                if *prev != y {
                    return Err(GroupError::NotHomomorphism {
                        x: domain.name_of(x).to_string(),
                        y: domain.name_of(Elem::IDENTITY).to_string(),
                    });
                }
                continue;
            }
            gens.push((x, y));
        }
        // Breadth-first extension d*s -> img(d)*img(s); any clash is a failed relation.
        let mut queue = VecDeque::from([Elem::IDENTITY]);
        while let Some(d) = queue.pop_front() {
            let img_d = image[d.idx()].unwrap();
            for &(s, img_s) in &gens {
                let ds = domain.mul(d, s);
                let want = codomain.mul(img_d, img_s);
                match image[ds.idx()] {
                    None => {
                        image[ds.idx()] = Some(want);
                        queue.push_back(ds);
                    }
                    Some(have) if have != want => {
                        return Err(GroupError::NotHomomorphism {
                            x: domain.name_of(d).to_string(),
                            y: domain.name_of(s).to_string(),
                        });
                    }
                    Some(_) => {}
                }
            }
        }
        let image_of: Vec<Elem> = image
            .iter()
            .enumerate()
            .map(|(i, e)| {
                e.ok_or_else(|| {
                    GroupError::Undetermined(domain.name_of(Elem(i as u32)).to_string())
                })
            })
            .collect::<Result<_, _>>()?;
        for x in domain.elements() {
            for y in domain.elements() {
                if image_of[domain.mul(x, y).idx()]
                    != codomain.mul(image_of[x.idx()], image_of[y.idx()])
                {
                    return Err(GroupError::NotHomomorphism {
                        x: domain.name_of(x).to_string(),
                        y: domain.name_of(y).to_string(),
                    });
                }
            }
        }
        let mut seen: BTreeMap<Elem, Elem> = BTreeMap::new();
        for x in domain.elements() {
            if let Some(&prev) = seen.get(&image_of[x.idx()]) {
                return Err(GroupError::NotInjective {
                    x: domain.name_of(prev).to_string(),
                    y: domain.name_of(x).to_string(),
                });
            }
            seen.insert(image_of[x.idx()], x);
        }
        Ok(Mono {
            domain: domain.clone(),
            codomain: codomain.clone(),
            image_of,
        })
    }

    /// Inclusion of a subgroup, viewed as a group, into its parent.
    pub fn inclusion(
        sub_group: &Arc<FiniteGroup>,
        parent: &Arc<FiniteGroup>,
    ) -> Result<Mono, GroupError> {
        let pairs: Vec<(Elem, Elem)> = sub_group
            .elements()
            .map(|e| {
                parent
                    .lookup(sub_group.name_of(e))
                    .map(|p| (e, p))
                    .ok_or_else(|| GroupError::UnknownElement(sub_group.name_of(e).to_string()))
            })
            .collect::<Result<_, _>>()?;
        Mono::check(sub_group, parent, &pairs)
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Mono {
        Mono {
            domain: g.clone(),
            codomain: g.clone(),
            image_of: g.elements().collect(),
        }
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroup> {
        &self.codomain
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.image_of[x.idx()]
    }

    pub fn image_list(&self) -> &[Elem] {
        &self.image_of
    }

    pub fn image(&self) -> Subgroup {
        let mut m = self.image_of.clone();
        m.sort();
        Subgroup {
            parent: self.codomain.clone(),
            members: m,
        }
    }

    pub fn is_surjective(&self) -> bool {
        self.domain.order() == self.codomain.order()
    }

    /// Preimage of `y`, if it lies in the image.
    pub fn preimage(&self, y: Elem) -> Option<Elem> {
        self.image_of
            .iter()
            .position(|&e| e == y)
            .map(|i| Elem(i as u32))
    }

    /// `other ∘ self`. Panics if the groups do not line up.
    pub fn then(&self, other: &Mono) -> Mono {
        assert!(
            *self.codomain == *other.domain,
            "composition of mismatched monomorphisms"
        );
        Mono {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            image_of: self.image_of.iter().map(|&e| other.apply(e)).collect(),
        }
    }

    /// The inverse of a bijective mono.
    pub fn invert(&self) -> Option<Mono> {
        if !self.is_surjective() {
            return None;
        }
        let mut inv = vec![Elem::IDENTITY; self.image_of.len()];
        for (i, &e) in self.image_of.iter().enumerate() {
            inv[e.idx()] = Elem(i as u32);
        }
        Some(Mono {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            image_of: inv,
        })
    }

    /// `c -> k * self(c) * k^-1`.
    pub fn twisted(&self, k: Elem) -> Mono {
        Mono {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            image_of: self
                .image_of
                .iter()
                .map(|&e| self.codomain.conj(k, e))
                .collect(),
        }
    }

    /// Same map with a different (but equal-as-set) codomain group object,
    /// used when a subgroup is re-materialized as its own group.
    pub fn corestrict(&self, new_codomain: &Arc<FiniteGroup>) -> Result<Mono, GroupError> {
        let pairs: Vec<(Elem, Elem)> = self
            .domain
            .elements()
            .map(|x| {
                let nm = self.codomain.name_of(self.apply(x));
                new_codomain
                    .lookup(nm)
                    .map(|y| (x, y))
                    .ok_or_else(|| GroupError::UnknownElement(nm.to_string()))
            })
            .collect::<Result<_, _>>()?;
        Mono::check(&self.domain, new_codomain, &pairs)
    }
}
