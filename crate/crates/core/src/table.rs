//! Identified, weighted tuples over a schema.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::fd::{validate_attribute, AttrSet, Fd, FdError, FdSet, FRESH_PREFIX};

pub type TupleId = u64;

/// Absolute tolerance for weight and distance comparisons.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing header row")]
    MissingHeader,
    #[error("first column must be `id`, found `{0}`")]
    MissingIdColumn(String),
    #[error(transparent)]
    Schema(#[from] FdError),
    #[error("row {row}: expected {expected} fields, found {found}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}: invalid id `{value}`")]
    InvalidId { row: usize, value: String },
    #[error("duplicate id {0}")]
    DuplicateId(TupleId),
    #[error("row {row}: invalid weight `{value}`")]
    InvalidWeight { row: usize, value: String },
    #[error("unknown tuple id {0}")]
    UnknownId(TupleId),
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("table schema {table:?} does not match FD schema {fds:?}")]
    SchemaMismatch {
        table: Vec<String>,
        fds: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub id: TupleId,
    pub values: Vec<String>,
    pub weight: f64,
}

/// A table with rows kept in ascending id order.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    schema: Vec<String>,
    rows: Vec<Row>,
    has_weight_column: bool,
}

/// Rows as read from CSV, before weight validation.
pub(crate) struct RawTable {
    pub schema: Vec<String>,
    pub rows: Vec<Row>,
    pub has_weight_column: bool,
}

pub(crate) fn read_csv(text: &str) -> Result<RawTable, TableError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        Some(h) => h?,
        None => return Err(TableError::MissingHeader),
    };
    let header: Vec<String> = header.iter().map(|h| h.trim().to_string()).collect();
    match header.first() {
        Some(first) if first == "id" => {}
        Some(first) => return Err(TableError::MissingIdColumn(first.clone())),
        None => return Err(TableError::MissingHeader),
    }
    let has_weight_column = header.len() > 1 && header.last().map(String::as_str) == Some("weight");
    let attr_end = if has_weight_column {
        header.len() - 1
    } else {
        header.len()
    };
    let schema: Vec<String> = header[1..attr_end].to_vec();
    for name in &schema {
        validate_attribute(name)?;
    }
    // Reuse FdSet's schema checks (duplicates, width).
    FdSet::new(&schema, [])?;

    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, record) in records.enumerate() {
        let record = record?;
        let row = i + 2;
        if record.len() != header.len() {
            return Err(TableError::Ragged {
                row,
                expected: header.len(),
                found: record.len(),
            });
        }
        let id_text = record[0].trim();
        let id: TupleId =
            id_text
                .parse()
                .ok()
                .filter(|&id| id > 0)
                .ok_or_else(|| TableError::InvalidId {
                    row,
                    value: id_text.to_string(),
                })?;
        if !seen.insert(id) {
            return Err(TableError::DuplicateId(id));
        }
        let values: Vec<String> = record
            .iter()
            .skip(1)
            .take(schema.len())
            .map(str::to_string)
            .collect();
        let weight = if has_weight_column {
            let text = record[header.len() - 1].trim();
            text.parse::<f64>()
                .ok()
                .filter(|w| w.is_finite())
                .ok_or_else(|| TableError::InvalidWeight {
                    row,
                    value: text.to_string(),
                })?
        } else {
            1.0
        };
        rows.push(Row { id, values, weight });
    }
    rows.sort_by_key(|r| r.id);
    Ok(RawTable {
        schema,
        rows,
        has_weight_column,
    })
}

pub(crate) fn write_csv<'a>(
    schema: &[String],
    rows: impl Iterator<Item = (&'a TupleId, Vec<&'a str>, f64)>,
    with_weight: bool,
) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id"];
    header.extend(schema.iter().map(String::as_str));
    if with_weight {
        header.push("weight");
    }
    writer.write_record(&header).expect("in-memory write");
    for (id, values, weight) in rows {
        let mut record = vec![id.to_string()];
        record.extend(values.into_iter().map(str::to_string));
        if with_weight {
            record.push(format_weight(weight));
        }
        writer.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Shortest round-tripping representation; integral weights print without a
/// fractional part.
pub fn format_weight(w: f64) -> String {
    if w.fract() == 0.0 && w.abs() < 1e15 {
        format!("{}", w as i64)
    } else {
        format!("{w}")
    }
}

impl Table {
    pub fn new<S: AsRef<str>>(schema: &[S], rows: Vec<Row>) -> Result<Self, TableError> {
        let schema: Vec<String> = schema.iter().map(|s| s.as_ref().to_string()).collect();
        FdSet::new(&schema, [])?;
        let mut seen = BTreeSet::new();
        for (i, row) in rows.iter().enumerate() {
            if row.id == 0 {
                return Err(TableError::InvalidId {
                    row: i + 1,
                    value: "0".into(),
                });
            }
            if !seen.insert(row.id) {
                return Err(TableError::DuplicateId(row.id));
            }
            if row.values.len() != schema.len() {
                return Err(TableError::Ragged {
                    row: i + 1,
                    expected: schema.len(),
                    found: row.values.len(),
                });
            }
            if !(row.weight > 0.0 && row.weight.is_finite()) {
                return Err(TableError::InvalidWeight {
                    row: i + 1,
                    value: row.weight.to_string(),
                });
            }
        }
        let mut rows = rows;
        rows.sort_by_key(|r| r.id);
        let has_weight_column = rows.iter().any(|r| r.weight != 1.0);
        Ok(Table {
            schema,
            rows,
            has_weight_column,
        })
    }

    /// Builds a table from `(id, values, weight)` triples.
    pub fn from_tuples<S: AsRef<str>>(
        schema: &[S],
        tuples: &[(TupleId, &[&str], f64)],
    ) -> Result<Self, TableError> {
        let rows = tuples
            .iter()
            .map(|(id, values, weight)| Row {
                id: *id,
                values: values.iter().map(|v| v.to_string()).collect(),
                weight: *weight,
            })
            .collect();
        Table::new(schema, rows)
    }

    /// Accepts any finite weights; callers validate them.
    pub(crate) fn from_raw(raw: RawTable) -> Table {
        Table {
            schema: raw.schema,
            rows: raw.rows,
            has_weight_column: raw.has_weight_column,
        }
    }

    /// Parses a table from CSV: header row, first column `id`, an optional
    /// last column `weight` (default 1), attributes in between.
    pub fn from_csv(text: &str) -> Result<Self, TableError> {
        let raw = read_csv(text)?;
        for (i, row) in raw.rows.iter().enumerate() {
            if row.weight <= 0.0 {
                return Err(TableError::InvalidWeight {
                    row: i + 2,
                    value: row.weight.to_string(),
                });
            }
        }
        Ok(Table {
            schema: raw.schema,
            rows: raw.rows,
            has_weight_column: raw.has_weight_column,
        })
    }

    pub fn to_csv(&self) -> String {
        write_csv(
            &self.schema,
            self.rows.iter().map(|r| {
                (
                    &r.id,
                    r.values.iter().map(String::as_str).collect(),
                    r.weight,
                )
            }),
            self.has_weight_column,
        )
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn has_weight_column(&self) -> bool {
        self.has_weight_column
    }

    pub fn ids(&self) -> impl Iterator<Item = TupleId> + '_ {
        self.rows.iter().map(|r| r.id)
    }

    pub fn position(&self, id: TupleId) -> Option<usize> {
        self.rows.binary_search_by_key(&id, |r| r.id).ok()
    }

    pub fn row(&self, id: TupleId) -> Option<&Row> {
        self.position(id).map(|p| &self.rows[p])
    }

    pub fn attr_index(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|n| n == name)
    }

    pub fn total_weight(&self) -> f64 {
        self.rows.iter().map(|r| r.weight).sum()
    }

    /// True when all weights are equal.
    pub fn is_unweighted(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].weight == w[1].weight)
    }

    /// True when no two rows carry the same tuple.
    pub fn is_duplicate_free(&self) -> bool {
        let distinct: BTreeSet<&Vec<String>> = self.rows.iter().map(|r| &r.values).collect();
        distinct.len() == self.rows.len()
    }

    /// The subtable on the given ids.
    pub fn subset(&self, ids: &BTreeSet<TupleId>) -> Result<Table, TableError> {
        if let Some(&bad) = ids.iter().find(|&&id| self.position(id).is_none()) {
            return Err(TableError::UnknownId(bad));
        }
        Ok(Table {
            schema: self.schema.clone(),
            rows: self
                .rows
                .iter()
                .filter(|r| ids.contains(&r.id))
                .cloned()
                .collect(),
            has_weight_column: self.has_weight_column,
        })
    }

    /// Same ids and values, different weights (used by reductions).
    pub fn reweighted(&self, weight: impl Fn(&Row) -> f64) -> Table {
        let rows = self
            .rows
            .iter()
            .map(|r| Row {
                weight: weight(r),
                ..r.clone()
            })
            .collect();
        Table {
            schema: self.schema.clone(),
            rows,
            has_weight_column: true,
        }
    }

    pub fn check_schema(&self, d: &FdSet) -> Result<(), TableError> {
        if d.names() != self.schema.as_slice() {
            return Err(TableError::SchemaMismatch {
                table: self.schema.clone(),
                fds: d.names().to_vec(),
            });
        }
        Ok(())
    }

    /// Applies an update, producing the updated table.
    pub fn apply(&self, update: &UpdateRepair) -> Result<Table, TableError> {
        let mut out = self.clone();
        for (&id, cells) in &update.updates {
            let pos = self.position(id).ok_or(TableError::UnknownId(id))?;
            for (&attr, value) in cells {
                if attr >= self.schema.len() {
                    return Err(TableError::UnknownAttribute(format!("#{attr}")));
                }
                out.rows[pos].values[attr] = value.clone();
            }
        }
        Ok(out)
    }
}

fn agree_on(a: &Row, b: &Row, attrs: AttrSet) -> bool {
    attrs.iter().all(|x| a.values[x] == b.values[x])
}

/// Whether two rows jointly violate `fd`.
pub fn violates(fd: &Fd, a: &Row, b: &Row) -> bool {
    agree_on(a, b, fd.lhs) && a.values[fd.rhs] != b.values[fd.rhs]
}

/// One violating pair.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub fd: Fd,
    pub ids: (TupleId, TupleId),
}

/// Lists every (FD, id pair) violation, pairs with `i < j`, sorted by FD
/// then pair. Empty iff the table satisfies `d`.
pub fn satisfies(t: &Table, d: &FdSet) -> Result<Vec<Violation>, TableError> {
    t.check_schema(d)?;
    let all: Vec<usize> = (0..t.len()).collect();
    Ok(violations_among(t, d, &all))
}

pub(crate) fn violations_among(t: &Table, d: &FdSet, rows: &[usize]) -> Vec<Violation> {
    let mut out = Vec::new();
    for fd in d.fds().iter().filter(|fd| !fd.is_trivial()) {
        let mut groups: HashMap<Vec<&str>, Vec<usize>> = HashMap::new();
        for &r in rows {
            let key = fd
                .lhs
                .iter()
                .map(|a| t.rows[r].values[a].as_str())
                .collect();
            groups.entry(key).or_default().push(r);
        }
        for members in groups.values() {
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    let (ra, rb) = (&t.rows[a], &t.rows[b]);
                    if ra.values[fd.rhs] != rb.values[fd.rhs] {
                        let ids = (ra.id.min(rb.id), ra.id.max(rb.id));
                        out.push(Violation { fd: *fd, ids });
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Weight of the rows missing from `retained`.
pub fn dist_sub(t: &Table, retained: &BTreeSet<TupleId>) -> Result<f64, TableError> {
    if let Some(&bad) = retained.iter().find(|&&id| t.position(id).is_none()) {
        return Err(TableError::UnknownId(bad));
    }
    Ok(t.rows
        .iter()
        .filter(|r| !retained.contains(&r.id))
        .map(|r| r.weight)
        .sum())
}

/// Weighted Hamming distance between `t` and `t` updated by `u`. Cells set to
/// their current value cost nothing.
pub fn dist_upd(t: &Table, u: &UpdateRepair) -> Result<f64, TableError> {
    let mut total = 0.0;
    for (&id, cells) in &u.updates {
        let row = t.row(id).ok_or(TableError::UnknownId(id))?;
        for (&attr, value) in cells {
            let old = row
                .values
                .get(attr)
                .ok_or_else(|| TableError::UnknownAttribute(format!("#{attr}")))?;
            if old != value {
                total += row.weight;
            }
        }
    }
    Ok(total)
}

/// Approximation guarantee attached to a repair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Guarantee {
    Exact,
    /// Distance at most `ratio` times the optimum.
    Approx(f64),
    /// No bound is known.
    Unknown,
}

impl Guarantee {
    pub fn ratio(self) -> f64 {
        match self {
            Guarantee::Exact => 1.0,
            Guarantee::Approx(r) => r,
            Guarantee::Unknown => f64::INFINITY,
        }
    }

    /// Label used in reports: `exact` or `<ratio>-approx`.
    pub fn label(self) -> String {
        match self {
            Guarantee::Exact => "exact".into(),
            Guarantee::Approx(r) => format!("{}-approx", format_weight(r)),
            Guarantee::Unknown => "unknown".into(),
        }
    }
}

/// A consistent subset.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetRepair {
    pub retained_ids: BTreeSet<TupleId>,
    pub distance: f64,
    pub guarantee: Guarantee,
}

impl SubsetRepair {
    pub fn deleted_ids(&self, t: &Table) -> Vec<TupleId> {
        t.ids()
            .filter(|id| !self.retained_ids.contains(id))
            .collect()
    }
}

/// Cell updates keyed by tuple id and attribute position.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct UpdateRepair {
    pub updates: BTreeMap<TupleId, BTreeMap<usize, String>>,
    pub distance: f64,
    pub guarantee: Option<Guarantee>,
}

impl UpdateRepair {
    pub fn set(&mut self, id: TupleId, attr: usize, value: String) {
        self.updates.entry(id).or_default().insert(attr, value);
    }

    pub fn touched_ids(&self) -> BTreeSet<TupleId> {
        self.updates
            .iter()
            .filter(|(_, cells)| !cells.is_empty())
            .map(|(&id, _)| id)
            .collect()
    }

    /// Merges updates on disjoint cells.
    pub fn extend(&mut self, other: UpdateRepair) {
        for (id, cells) in other.updates {
            self.updates.entry(id).or_default().extend(cells);
        }
    }

    /// Change log rows `(id, attribute, old, new)` for cells whose value
    /// actually changes.
    pub fn change_log<'a>(&'a self, t: &'a Table) -> Vec<(TupleId, &'a str, &'a str, &'a str)> {
        let mut out = Vec::new();
        for (&id, cells) in &self.updates {
            let Some(row) = t.row(id) else { continue };
            for (&attr, new) in cells {
                let old = &row.values[attr];
                if old != new {
                    out.push((id, t.schema[attr].as_str(), old.as_str(), new.as_str()));
                }
            }
        }
        out
    }

    /// The change log as CSV with header `id,attribute,old,new`.
    pub fn change_log_csv(&self, t: &Table) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(["id", "attribute", "old", "new"])
            .expect("in-memory write");
        for (id, attr, old, new) in self.change_log(t) {
            writer
                .write_record([id.to_string().as_str(), attr, old, new])
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

/// Mints values `⟨fresh:1⟩`, `⟨fresh:2⟩`, ...
#[derive(Debug, Default)]
pub struct FreshValues {
    next: u64,
}

impl FreshValues {
    pub fn new() -> Self {
        FreshValues { next: 0 }
    }

    /// Numbering continues past every fresh value already in `t`, so a
    /// repaired table can be repaired again.
    pub fn for_table(t: &Table) -> Self {
        let next = t
            .rows
            .iter()
            .flat_map(|r| &r.values)
            .filter_map(|v| {
                v.strip_prefix(FRESH_PREFIX)?
                    .strip_suffix('⟩')?
                    .parse::<u64>()
                    .ok()
            })
            .max()
            .unwrap_or(0);
        FreshValues { next }
    }

    pub fn mint(&mut self) -> String {
        self.next += 1;
        format!("{FRESH_PREFIX}{}⟩", self.next)
    }
}

/// Tuples as nodes, with an edge between every two tuples that jointly
/// violate at least one FD.
#[derive(Clone, Debug, PartialEq)]
pub struct ConflictGraph {
    pub nodes: Vec<TupleId>,
    /// Keyed by `(min id, max id)`; values list the violated FDs.
    pub edges: BTreeMap<(TupleId, TupleId), Vec<Fd>>,
}

impl ConflictGraph {
    pub fn neighbors(&self, id: TupleId) -> impl Iterator<Item = TupleId> + '_ {
        self.edges.keys().filter_map(move |&(a, b)| {
            if a == id {
                Some(b)
            } else if b == id {
                Some(a)
            } else {
                None
            }
        })
    }
}

pub fn conflict_graph(t: &Table, d: &FdSet) -> Result<ConflictGraph, TableError> {
    let mut edges: BTreeMap<(TupleId, TupleId), Vec<Fd>> = BTreeMap::new();
    for v in satisfies(t, d)? {
        edges.entry(v.ids).or_default().push(v.fd);
    }
    Ok(ConflictGraph {
        nodes: t.ids().collect(),
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::parse_fds;
    use crate::fixtures;

    #[test]
    fn loads_office_table() {
        let t = fixtures::office_table();
        assert_eq!(t.len(), 4);
        assert_eq!(t.row(1).unwrap().weight, 2.0);
        assert_eq!(t.schema(), &["facility", "room", "floor", "city"]);
        assert!(t.has_weight_column());
        assert_eq!(Table::from_csv(&t.to_csv()).unwrap(), t);
    }

    #[test]
    fn header_only_is_empty() {
        let t = Table::from_csv("id,A,B\n").unwrap();
        assert!(t.is_empty());
        assert!(!t.has_weight_column());
    }

    #[test]
    fn load_errors() {
        assert!(matches!(
            Table::from_csv("id,A,weight\n1,x,0\n"),
            Err(TableError::InvalidWeight { row: 2, .. })
        ));
        assert!(matches!(
            Table::from_csv("id,A,weight\n1,x,heavy\n"),
            Err(TableError::InvalidWeight { .. })
        ));
        assert!(matches!(
            Table::from_csv("id,A\n1,x\n1,y\n"),
            Err(TableError::DuplicateId(1))
        ));
        assert!(matches!(
            Table::from_csv("id,A,B\n1,x\n"),
            Err(TableError::Ragged { row: 2, .. })
        ));
        assert!(matches!(
            Table::from_csv("A,B\n"),
            Err(TableError::MissingIdColumn(_))
        ));
        assert!(matches!(
            Table::from_csv(""),
            Err(TableError::MissingHeader)
        ));
        assert!(matches!(
            Table::from_csv("id,A\n-3,x\n"),
            Err(TableError::InvalidId { .. })
        ));
    }

    #[test]
    fn quoted_fields_round_trip() {
        let t = Table::from_csv("id,A,B\n1,\"x, y\",\"say \"\"hi\"\"\"\n").unwrap();
        assert_eq!(t.row(1).unwrap().values, vec!["x, y", "say \"hi\""]);
        assert_eq!(Table::from_csv(&t.to_csv()).unwrap(), t);
    }

    #[test]
    fn office_violations() {
        let (t, d) = (fixtures::office_table(), fixtures::office_fds());
        let v = satisfies(&t, &d).unwrap();
        let city = Fd::new(d.attr_set(&["facility"]).unwrap(), 3);
        assert!(v.contains(&Violation {
            fd: city,
            ids: (1, 2)
        }));
        let s2 = t.subset(&[1, 4].into()).unwrap();
        assert!(satisfies(&s2, &d).unwrap().is_empty());
        let one = t.subset(&[3].into()).unwrap();
        assert!(satisfies(&one, &d).unwrap().is_empty());
    }

    #[test]
    fn schema_mismatch_is_an_error() {
        let t = fixtures::office_table();
        let d = parse_fds("A -> B", &["A", "B"]).unwrap();
        assert!(matches!(
            satisfies(&t, &d),
            Err(TableError::SchemaMismatch { .. })
        ));
    }

    #[test]
    fn subset_distances() {
        let t = fixtures::office_table();
        assert_eq!(dist_sub(&t, &[2, 3, 4].into()).unwrap(), 2.0);
        assert_eq!(dist_sub(&t, &[3, 4].into()).unwrap(), 3.0);
        assert_eq!(dist_sub(&t, &t.ids().collect()).unwrap(), 0.0);
        assert!(matches!(
            dist_sub(&t, &[9].into()),
            Err(TableError::UnknownId(9))
        ));
    }

    #[test]
    fn update_distances() {
        let t = fixtures::office_table();
        let (floor, city) = (2, 3);
        let mut u2 = UpdateRepair::default();
        u2.set(2, floor, "3".into());
        u2.set(2, city, "Paris".into());
        u2.set(3, city, "Paris".into());
        assert_eq!(dist_upd(&t, &u2).unwrap(), 3.0);
        assert!(satisfies(&t.apply(&u2).unwrap(), &fixtures::office_fds())
            .unwrap()
            .is_empty());

        let mut u3 = UpdateRepair::default();
        u3.set(1, floor, "30".into());
        u3.set(1, city, "Madrid".into());
        assert_eq!(dist_upd(&t, &u3).unwrap(), 4.0);

        assert_eq!(dist_upd(&t, &UpdateRepair::default()).unwrap(), 0.0);
        let mut noop = UpdateRepair::default();
        noop.set(1, city, "Paris".into());
        assert_eq!(dist_upd(&t, &noop).unwrap(), 0.0);

        let mut bad = UpdateRepair::default();
        bad.set(7, 0, "x".into());
        assert!(dist_upd(&t, &bad).is_err());
    }

    #[test]
    fn change_log_lists_real_changes() {
        let t = fixtures::office_table();
        let mut u = UpdateRepair::default();
        u.set(1, 0, "F01".into());
        u.set(2, 3, "Madrid".into());
        assert_eq!(
            u.change_log_csv(&t),
            "id,attribute,old,new\n1,facility,HQ,F01\n"
        );
    }

    #[test]
    fn office_conflict_graph() {
        let g = conflict_graph(&fixtures::office_table(), &fixtures::office_fds()).unwrap();
        let edges: Vec<_> = g.edges.keys().copied().collect();
        assert_eq!(edges, vec![(1, 2), (1, 3)]);
        assert_eq!(g.edges[&(1, 2)].len(), 2);
        assert_eq!(g.neighbors(1).collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn identical_tuples_never_conflict() {
        let d = parse_fds("A -> B", &["A", "B"]).unwrap();
        let t = Table::from_csv("id,A,B\n1,x,y\n2,x,y\n").unwrap();
        assert!(conflict_graph(&t, &d).unwrap().edges.is_empty());
        assert!(!t.is_duplicate_free());
    }

    #[test]
    fn fresh_values_are_distinct() {
        let mut fresh = FreshValues::new();
        assert_eq!(fresh.mint(), "⟨fresh:1⟩");
        assert_eq!(fresh.mint(), "⟨fresh:2⟩");
        let t = Table::from_csv("id,A,B\n1,⟨fresh:3⟩,x\n2,⟨fresh:x⟩,⟨fresh:12⟩\n").unwrap();
        assert_eq!(FreshValues::for_table(&t).mint(), "⟨fresh:13⟩");
    }
}
