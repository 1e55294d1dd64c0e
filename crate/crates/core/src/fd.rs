//! Functional dependencies over a fixed attribute list.
//!
//! Attributes are addressed by their position in the schema and sets of
//! attributes are bitsets, so a schema holds at most [`MAX_ATTRIBUTES`]
//! attributes. Every FD is kept normalized with a single attribute on the
//! right-hand side.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Prefix reserved for values minted by update repairs.
pub const FRESH_PREFIX: &str = "⟨fresh:";

pub const MAX_ATTRIBUTES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FdError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: attribute `{name}` is not in the schema")]
    UnknownAttribute { line: usize, name: String },
    #[error("line {line}: empty right-hand side")]
    EmptyRhs { line: usize },
    #[error("invalid attribute name `{0}`")]
    InvalidAttribute(String),
    #[error("duplicate attribute `{0}` in schema")]
    DuplicateAttribute(String),
    #[error("schema has {0} attributes; at most {MAX_ATTRIBUTES} are supported")]
    TooManyAttributes(usize),
    #[error("empty schema")]
    EmptySchema,
}

/// A set of attribute positions.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttrSet(u64);

impl AttrSet {
    pub const EMPTY: AttrSet = AttrSet(0);

    pub fn from_bits(bits: u64) -> Self {
        AttrSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(attr: usize) -> Self {
        debug_assert!(attr < MAX_ATTRIBUTES);
        AttrSet(1 << attr)
    }

    /// The first `n` attribute positions.
    pub fn prefix(n: usize) -> Self {
        if n >= 64 {
            AttrSet(u64::MAX)
        } else {
            AttrSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, attr: usize) -> bool {
        attr < MAX_ATTRIBUTES && self.0 & (1 << attr) != 0
    }

    pub fn insert(&mut self, attr: usize) {
        self.0 |= 1 << attr;
    }

    pub fn remove(&mut self, attr: usize) {
        self.0 &= !(1 << attr);
    }

    pub fn with(self, attr: usize) -> Self {
        AttrSet(self.0 | 1 << attr)
    }

    pub fn union(self, other: AttrSet) -> Self {
        AttrSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AttrSet) -> Self {
        AttrSet(self.0 & other.0)
    }

    pub fn difference(self, other: AttrSet) -> Self {
        AttrSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: AttrSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: AttrSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Positions in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let next = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(next)
            }
        })
    }
}

impl FromIterator<usize> for AttrSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = AttrSet::EMPTY;
        for attr in iter {
            set.insert(attr);
        }
        set
    }
}

impl fmt::Debug for AttrSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// `lhs -> rhs` with a single right-hand attribute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fd {
    pub lhs: AttrSet,
    pub rhs: usize,
}

impl Fd {
    pub fn new(lhs: AttrSet, rhs: usize) -> Self {
        Fd { lhs, rhs }
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs.contains(self.rhs)
    }

    pub fn is_consensus(&self) -> bool {
        self.lhs.is_empty()
    }

    pub fn attrs(&self) -> AttrSet {
        self.lhs.with(self.rhs)
    }
}

/// Outcome of looking for one of the three simplifications, checked in the
/// order common lhs, consensus, lhs marriage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Simplification {
    /// No nontrivial FD is left.
    Trivial,
    CommonLhs(usize),
    /// Every attribute `A` with `∅ -> A` in the set.
    Consensus(AttrSet),
    LhsMarriage(AttrSet, AttrSet),
    /// Nontrivial, and none of the simplifications applies.
    Stuck,
}

/// Structural measures of an FD set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FdMetrics {
    /// Minimum lhs cover size; `None` when a consensus FD exists.
    pub mlc: Option<usize>,
    /// Largest lhs.
    pub mfs: usize,
    /// Largest minimum core implicant over the non-consensus attributes.
    pub mci: usize,
    pub is_chain: bool,
    pub consensus_attrs: AttrSet,
}

/// A normalized set of FDs over a named schema.
///
/// Attribute removal shrinks the set of active attributes but keeps every
/// position stable, so attribute indices always line up with table columns.
#[derive(Clone, PartialEq, Eq)]
pub struct FdSet {
    names: Arc<[String]>,
    active: AttrSet,
    fds: Vec<Fd>,
}

impl FdSet {
    pub fn new<S: AsRef<str>>(
        schema: &[S],
        fds: impl IntoIterator<Item = Fd>,
    ) -> Result<Self, FdError> {
        let names = validate_schema(schema)?;
        let active = AttrSet::prefix(names.len());
        let mut set = FdSet {
            names: names.into(),
            active,
            fds: Vec::new(),
        };
        for fd in fds {
            if !fd.attrs().is_subset(active) {
                return Err(FdError::InvalidAttribute(format!(
                    "position {:?}",
                    fd.attrs()
                )));
            }
            set.fds.push(fd);
        }
        set.canonicalize();
        Ok(set)
    }

    /// An FD set sharing this one's schema with a different list of FDs.
    pub fn with_fds(&self, fds: impl IntoIterator<Item = Fd>) -> Self {
        let mut set = FdSet {
            names: self.names.clone(),
            active: self.active,
            fds: fds.into_iter().collect(),
        };
        set.canonicalize();
        set
    }

    fn canonicalize(&mut self) {
        self.fds.sort();
        self.fds.dedup();
    }

    /// All attribute names, including removed ones.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, attr: usize) -> &str {
        &self.names[attr]
    }

    /// Names of the attributes that have not been removed.
    pub fn schema(&self) -> Vec<&str> {
        self.active.iter().map(|a| self.name(a)).collect()
    }

    pub fn active(&self) -> AttrSet {
        self.active
    }

    pub fn fds(&self) -> &[Fd] {
        &self.fds
    }

    pub fn len(&self) -> usize {
        self.fds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fds.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn attr_set<S: AsRef<str>>(&self, names: &[S]) -> Option<AttrSet> {
        names
            .iter()
            .map(|n| self.index_of(n.as_ref()))
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().collect())
    }

    /// Attributes mentioned by some FD.
    pub fn attrs(&self) -> AttrSet {
        self.fds
            .iter()
            .fold(AttrSet::EMPTY, |acc, fd| acc.union(fd.attrs()))
    }

    pub fn lhs_attrs(&self) -> AttrSet {
        self.fds
            .iter()
            .fold(AttrSet::EMPTY, |acc, fd| acc.union(fd.lhs))
    }

    /// True when the set contains no nontrivial FD.
    pub fn is_trivial(&self) -> bool {
        self.fds.iter().all(Fd::is_trivial)
    }

    pub fn without_trivial(&self) -> Self {
        self.with_fds(self.fds.iter().copied().filter(|fd| !fd.is_trivial()))
    }

    pub fn has_consensus_fd(&self) -> bool {
        self.fds
            .iter()
            .any(|fd| fd.is_consensus() && !fd.is_trivial())
    }

    /// `cl(x)`: every attribute determined by `x`.
    pub fn closure(&self, x: AttrSet) -> AttrSet {
        let mut closed = x;
        loop {
            let before = closed;
            for fd in &self.fds {
                if fd.lhs.is_subset(closed) {
                    closed.insert(fd.rhs);
                }
            }
            if closed == before {
                return closed;
            }
        }
    }

    pub fn entails(&self, lhs: AttrSet, rhs: AttrSet) -> bool {
        rhs.is_subset(self.closure(lhs))
    }

    pub fn consensus_attrs(&self) -> AttrSet {
        self.closure(AttrSet::EMPTY)
    }

    /// `Δ − X`: strips every attribute of `x` from every lhs and rhs. FDs
    /// whose rhs is removed disappear.
    pub fn remove_attrs(&self, x: AttrSet) -> Self {
        let mut set = FdSet {
            names: self.names.clone(),
            active: self.active.difference(x),
            fds: self
                .fds
                .iter()
                .filter(|fd| !x.contains(fd.rhs))
                .map(|fd| Fd::new(fd.lhs.difference(x), fd.rhs))
                .collect(),
        };
        set.canonicalize();
        set
    }

    /// Sorted attribute names of `set`, used for deterministic tie-breaking.
    pub fn sorted_names(&self, set: AttrSet) -> Vec<&str> {
        let mut names: Vec<&str> = set.iter().map(|a| self.name(a)).collect();
        names.sort_unstable();
        names
    }

    /// Finds the first applicable simplification after dropping trivial FDs.
    /// Ties are broken by the lexicographically least attribute name (or pair
    /// of sorted name lists).
    pub fn detect_simplification(&self) -> Simplification {
        let fds: Vec<Fd> = self
            .fds
            .iter()
            .copied()
            .filter(|fd| !fd.is_trivial())
            .collect();
        if fds.is_empty() {
            return Simplification::Trivial;
        }

        let common = fds
            .iter()
            .fold(self.active, |acc, fd| acc.intersection(fd.lhs));
        if let Some(attr) = common.iter().min_by_key(|&a| self.name(a)) {
            return Simplification::CommonLhs(attr);
        }

        let consensus: AttrSet = fds
            .iter()
            .filter(|fd| fd.is_consensus())
            .map(|fd| fd.rhs)
            .collect();
        if !consensus.is_empty() {
            return Simplification::Consensus(consensus);
        }

        let lhss: BTreeSet<AttrSet> = fds.iter().map(|fd| fd.lhs).collect();
        let lhss: Vec<AttrSet> = lhss.into_iter().collect();
        let mut best: Option<(Vec<&str>, Vec<&str>, AttrSet, AttrSet)> = None;
        for (i, &x1) in lhss.iter().enumerate() {
            let cl1 = self.closure(x1);
            for &x2 in &lhss[i + 1..] {
                if self.closure(x2) != cl1 {
                    continue;
                }
                if !fds
                    .iter()
                    .all(|fd| x1.is_subset(fd.lhs) || x2.is_subset(fd.lhs))
                {
                    continue;
                }
                let (n1, n2) = (self.sorted_names(x1), self.sorted_names(x2));
                let candidate = if n1 <= n2 {
                    (n1, n2, x1, x2)
                } else {
                    (n2, n1, x2, x1)
                };
                let better = match &best {
                    None => true,
                    Some(b) => (&candidate.0, &candidate.1) < (&b.0, &b.1),
                };
                if better {
                    best = Some(candidate);
                }
            }
        }
        match best {
            Some((_, _, x1, x2)) => Simplification::LhsMarriage(x1, x2),
            None => Simplification::Stuck,
        }
    }

    /// True when every two lhs are ordered by inclusion.
    pub fn is_chain(&self) -> bool {
        let lhss: Vec<AttrSet> = self
            .fds
            .iter()
            .filter(|fd| !fd.is_trivial())
            .map(|fd| fd.lhs)
            .collect();
        lhss.iter().enumerate().all(|(i, &x)| {
            lhss[i + 1..]
                .iter()
                .all(|&y| x.is_subset(y) || y.is_subset(x))
        })
    }

    /// A minimum-cardinality set of attributes meeting every lhs, or `None`
    /// if some lhs is empty. Among minimum covers the one whose sorted names
    /// come first is returned.
    pub fn min_lhs_cover(&self) -> Option<AttrSet> {
        let lhss: Vec<AttrSet> = self
            .fds
            .iter()
            .filter(|fd| !fd.is_trivial())
            .map(|fd| fd.lhs)
            .collect();
        let universe = self.name_ordered(self.lhs_attrs_of(&lhss));
        min_hitting_set(&lhss, &universe)
    }

    fn lhs_attrs_of(&self, lhss: &[AttrSet]) -> AttrSet {
        lhss.iter().fold(AttrSet::EMPTY, |acc, &x| acc.union(x))
    }

    fn name_ordered(&self, set: AttrSet) -> Vec<usize> {
        let mut attrs: Vec<usize> = set.iter().collect();
        attrs.sort_by_key(|&a| self.name(a));
        attrs
    }

    /// Inclusion-minimal sets `X` with `attr ∈ cl(X) ∖ X`.
    pub fn minimal_implicants(&self, attr: usize) -> Vec<AttrSet> {
        let universe: Vec<usize> = self
            .lhs_attrs()
            .difference(AttrSet::singleton(attr))
            .iter()
            .collect();
        let mut found: Vec<AttrSet> = Vec::new();
        for size in 0..=universe.len() {
            for_each_combination(&universe, size, &mut |x| {
                if found.iter().any(|f| f.is_subset(x)) {
                    return false;
                }
                if self.closure(x).contains(attr) {
                    found.push(x);
                }
                false
            });
        }
        found
    }

    pub fn metrics(&self) -> FdMetrics {
        let nontrivial = self.without_trivial();
        let consensus_attrs = nontrivial.consensus_attrs();
        let mlc = nontrivial.min_lhs_cover().map(AttrSet::len);
        let mfs = nontrivial
            .fds
            .iter()
            .map(|fd| fd.lhs.len())
            .max()
            .unwrap_or(0);
        let mut mci = 0;
        for attr in nontrivial.attrs().difference(consensus_attrs).iter() {
            let implicants = nontrivial.minimal_implicants(attr);
            let universe = nontrivial.name_ordered(nontrivial.lhs_attrs_of(&implicants));
            // Implicants of a non-consensus attribute are never empty, so a
            // hitting set always exists.
            let core = min_hitting_set(&implicants, &universe).map_or(0, AttrSet::len);
            mci = mci.max(core);
        }
        FdMetrics {
            mlc,
            mfs,
            mci,
            is_chain: nontrivial.is_chain(),
            consensus_attrs,
        }
    }

    pub fn fd_to_string(&self, fd: &Fd) -> String {
        let lhs: Vec<&str> = fd.lhs.iter().map(|a| self.name(a)).collect();
        if lhs.is_empty() {
            format!("-> {}", self.name(fd.rhs))
        } else {
            format!("{} -> {}", lhs.join(", "), self.name(fd.rhs))
        }
    }

    /// Serializes in the FD file format, one FD per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for fd in &self.fds {
            out.push_str(&self.fd_to_string(fd));
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for FdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.fds.iter().map(|fd| self.fd_to_string(fd)).collect();
        write!(f, "{{{}}}", parts.join("; "))
    }
}

/// Calls `visit` on every `size`-subset of `items`, in lexicographic order of
/// positions within `items`. Stops early when `visit` returns true.
pub(crate) fn for_each_combination(
    items: &[usize],
    size: usize,
    visit: &mut dyn FnMut(AttrSet) -> bool,
) -> bool {
    fn go(
        items: &[usize],
        start: usize,
        left: usize,
        acc: AttrSet,
        visit: &mut dyn FnMut(AttrSet) -> bool,
    ) -> bool {
        if left == 0 {
            return visit(acc);
        }
        for i in start..=items.len().saturating_sub(left) {
            if items.len() < left {
                break;
            }
            if go(items, i + 1, left - 1, acc.with(items[i]), visit) {
                return true;
            }
        }
        false
    }
    if size > items.len() {
        return false;
    }
    go(items, 0, size, AttrSet::EMPTY, visit)
}

/// Exhaustive minimum hitting set, trying subsets of `universe` by
/// increasing size. `None` when some set is empty.
fn min_hitting_set(sets: &[AttrSet], universe: &[usize]) -> Option<AttrSet> {
    if sets.iter().any(|s| s.is_empty()) {
        return None;
    }
    for size in 0..=universe.len() {
        let mut hit = None;
        for_each_combination(universe, size, &mut |c| {
            if sets.iter().all(|s| s.intersects(c)) {
                hit = Some(c);
                true
            } else {
                false
            }
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}

pub fn validate_attribute(name: &str) -> Result<(), FdError> {
    let bad = name.is_empty()
        || name
            .chars()
            .any(|c| c.is_whitespace() || c == ',' || c == '#')
        || name.contains("->")
        || name.contains(FRESH_PREFIX);
    if bad {
        Err(FdError::InvalidAttribute(name.to_string()))
    } else {
        Ok(())
    }
}

fn validate_schema<S: AsRef<str>>(schema: &[S]) -> Result<Vec<String>, FdError> {
    if schema.len() > MAX_ATTRIBUTES {
        return Err(FdError::TooManyAttributes(schema.len()));
    }
    let mut seen = BTreeSet::new();
    let mut names = Vec::with_capacity(schema.len());
    for name in schema {
        let name = name.as_ref();
        validate_attribute(name)?;
        if !seen.insert(name) {
            return Err(FdError::DuplicateAttribute(name.to_string()));
        }
        names.push(name.to_string());
    }
    Ok(names)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn split_attrs(part: &str, line: usize) -> Result<Vec<&str>, FdError> {
    let part = part.trim();
    if part.is_empty() {
        return Ok(Vec::new());
    }
    part.split(',')
        .map(|tok| {
            let tok = tok.trim();
            if tok.is_empty() {
                Err(FdError::Syntax {
                    line,
                    message: "empty attribute name".into(),
                })
            } else if tok.chars().any(char::is_whitespace) {
                Err(FdError::Syntax {
                    line,
                    message: format!("attributes must be comma-separated: `{tok}`"),
                })
            } else {
                Ok(tok)
            }
        })
        .collect()
}

type Line<'a> = (usize, Vec<&'a str>, Vec<&'a str>);

/// Splits each non-blank, non-comment line into (line number, lhs, rhs).
fn parse_lines(text: &str) -> Result<Vec<Line<'_>>, FdError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        let mut parts = body.split("->");
        let (lhs, rhs) = match (parts.next(), parts.next(), parts.next()) {
            (Some(l), Some(r), None) => (l, r),
            _ => {
                return Err(FdError::Syntax {
                    line,
                    message: "expected exactly one `->`".into(),
                })
            }
        };
        let lhs = split_attrs(lhs, line)?;
        let rhs = split_attrs(rhs, line)?;
        if rhs.is_empty() {
            return Err(FdError::EmptyRhs { line });
        }
        out.push((line, lhs, rhs));
    }
    Ok(out)
}

/// Parses an FD file against `schema`. Each line is `A, B -> C, D` (or
/// `-> C` for a consensus FD); `#` starts a comment. Right-hand sides are
/// split into one FD per attribute.
pub fn parse_fds<S: AsRef<str>>(text: &str, schema: &[S]) -> Result<FdSet, FdError> {
    let names = validate_schema(schema)?;
    let lookup = |name: &str, line: usize| {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| FdError::UnknownAttribute {
                line,
                name: name.to_string(),
            })
    };
    let mut fds = Vec::new();
    for (line, lhs, rhs) in parse_lines(text)? {
        let lhs: AttrSet = lhs
            .iter()
            .map(|n| lookup(n, line))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .collect();
        for name in rhs {
            fds.push(Fd::new(lhs, lookup(name, line)?));
        }
    }
    FdSet::new(&names, fds)
}

/// Attribute names of an FD file in order of first appearance.
pub fn infer_schema(text: &str) -> Result<Vec<String>, FdError> {
    let mut names: Vec<String> = Vec::new();
    for (_, lhs, rhs) in parse_lines(text)? {
        for name in lhs.into_iter().chain(rhs) {
            if !names.iter().any(|n| n == name) {
                validate_attribute(name)?;
                names.push(name.to_string());
            }
        }
    }
    if names.len() > MAX_ATTRIBUTES {
        return Err(FdError::TooManyAttributes(names.len()));
    }
    Ok(names)
}

/// Reads a schema from the first non-comment line of `text`: a
/// comma-separated attribute list. A table header (`id,...[,weight]`) is
/// accepted too, with the bookkeeping columns dropped.
pub fn parse_schema(text: &str) -> Result<Vec<String>, FdError> {
    let line = text
        .lines()
        .map(|l| strip_comment(l).trim())
        .find(|l| !l.is_empty())
        .ok_or(FdError::EmptySchema)?;
    let mut names: Vec<String> = line.split(',').map(|t| t.trim().to_string()).collect();
    if names.first().map(String::as_str) == Some("id") {
        names.remove(0);
        if names.last().map(String::as_str) == Some("weight") {
            names.pop();
        }
    }
    if names.is_empty() {
        return Err(FdError::EmptySchema);
    }
    validate_schema(&names)
}
