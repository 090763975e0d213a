//! Set systems as incidence structures with per-element (column) and
//! per-set (row) views, plus ±1 colorings and exact discrepancy evaluation.

use crate::error::{Error, Result};

/// Incidence structure over `n` elements and `m` sets.
///
/// Element `x` carries a sorted, duplicate-free column `T_x` of set indices;
/// the row view `S_i = {x : i in T_x}` is derived at construction. Sparsity
/// `t` is the maximum column length. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    n: usize,
    m: usize,
    columns: Vec<Vec<usize>>,
    rows: Vec<Vec<usize>>,
    t: usize,
}

impl SetSystem {
    /// Builds a system from per-element columns. Columns must be sorted and
    /// duplicate-free with every index below `m`.
    pub fn new(m: usize, columns: Vec<Vec<usize>>) -> Result<Self> {
        let n = columns.len();
        let mut rows = vec![Vec::new(); m];
        let mut t = 0;
        for (x, col) in columns.iter().enumerate() {
            for (k, &i) in col.iter().enumerate() {
                if i >= m {
                    return Err(Error::IndexOutOfRange {
                        element: x,
                        index: i,
                        m,
                    });
                }
                if k > 0 {
                    if col[k - 1] == i {
                        return Err(Error::DuplicateIndex {
                            element: x,
                            index: i,
                        });
                    }
                    if col[k - 1] > i {
                        return Err(Error::UnsortedColumn { element: x });
                    }
                }
                rows[i].push(x);
            }
            t = t.max(col.len());
        }
        Ok(SetSystem {
            n,
            m,
            columns,
            rows,
            t,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Sparsity: the maximum number of sets any element lies in.
    pub fn sparsity(&self) -> usize {
        self.t
    }

    /// Column `T_x`: the sets containing element `x`.
    pub fn column(&self, x: usize) -> &[usize] {
        &self.columns[x]
    }

    /// Row `S_i`: the elements of set `i`, in increasing order.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Restriction to an element subset `Y`, re-indexed densely to
    /// `0..|Y|`. Each surviving element keeps its full column, so sparsity
    /// does not increase past the original.
    pub fn restrict(&self, subset: &[usize]) -> Result<Restriction> {
        let mut keep = vec![false; self.n];
        for &x in subset {
            if x >= self.n {
                return Err(Error::ElementOutOfRange {
                    index: x,
                    n: self.n,
                });
            }
            keep[x] = true;
        }
        let mut old_to_new = vec![None; self.n];
        let mut new_to_old = Vec::new();
        let mut columns = Vec::new();
        for x in 0..self.n {
            if keep[x] {
                old_to_new[x] = Some(new_to_old.len());
                new_to_old.push(x);
                columns.push(self.columns[x].clone());
            }
        }
        let system = SetSystem::new(self.m, columns)?;
        Ok(Restriction {
            system,
            old_to_new,
            new_to_old,
        })
    }

    /// Signed sum of set `i` under `chi`, taken over `S_i` intersected with
    /// the coloring's domain.
    pub fn set_sum(&self, chi: &Coloring, i: usize) -> Result<i64> {
        if i >= self.m {
            return Err(Error::SetOutOfRange {
                index: i,
                m: self.m,
            });
        }
        Ok(self.rows[i]
            .iter()
            .filter_map(|&x| chi.sign(x))
            .map(i64::from)
            .sum())
    }

    /// Max over all sets of the absolute signed sum; 0 when `m = 0`.
    pub fn coloring_discrepancy(&self, chi: &Coloring) -> i64 {
        (0..self.m)
            .map(|i| self.set_sum(chi, i).expect("index in range").abs())
            .max()
            .unwrap_or(0)
    }

    /// Serializes to the plain text interchange format: a header line
    /// `n m t`, then one line per element holding its sorted column
    /// (an empty line for an empty column). LF newlines.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.m, self.t);
        for col in &self.columns {
            let line: Vec<String> = col.iter().map(|i| i.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text format produced by [`SetSystem::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "missing header line".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected 'n m t', got {:?}", header),
            });
        }
        let parse = |s: &str, line: usize| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad integer {:?}", s),
            })
        };
        let n = parse(fields[0], 1)?;
        let m = parse(fields[1], 1)?;
        let t = parse(fields[2], 1)?;
        let mut columns = Vec::with_capacity(n);
        for x in 0..n {
            let line = lines.next().ok_or_else(|| Error::Parse {
                line: x + 2,
                msg: format!("missing column for element {x}"),
            })?;
            let col: Result<Vec<usize>> =
                line.split_whitespace().map(|s| parse(s, x + 2)).collect();
            columns.push(col?);
        }
        let sys = SetSystem::new(m, columns)?;
        if sys.sparsity() != t {
            return Err(Error::Parse {
                line: 1,
                msg: format!(
                    "declared t = {t} but max column length is {}",
                    sys.sparsity()
                ),
            });
        }
        Ok(sys)
    }
}

/// Result of [`SetSystem::restrict`]: the re-indexed system plus both
/// direction maps, so colorings of the restriction can be pulled back.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub system: SetSystem,
    pub old_to_new: Vec<Option<usize>>,
    pub new_to_old: Vec<usize>,
}

/// Signs in `{-1, +1}` over a subset of the elements. Elements outside the
/// domain carry no sign and contribute nothing to set sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    signs: Vec<i8>,
}

impl Coloring {
    /// Empty-domain coloring over element space `0..n`.
    pub fn new(n: usize) -> Self {
        Coloring { signs: vec![0; n] }
    }

    pub fn set(&mut self, x: usize, sign: i8) {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        self.signs[x] = sign;
    }

    pub fn unset(&mut self, x: usize) {
        self.signs[x] = 0;
    }

    pub fn sign(&self, x: usize) -> Option<i8> {
        match self.signs.get(x) {
            Some(&s) if s != 0 => Some(s),
            _ => None,
        }
    }

    pub fn n(&self) -> usize {
        self.signs.len()
    }

    pub fn domain_len(&self) -> usize {
        self.signs.iter().filter(|&&s| s != 0).count()
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != 0)
            .map(|(x, _)| x)
    }

    /// Serializes as `n k` followed by `k` lines `x sign`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.domain_len());
        for x in self.domain() {
            out.push_str(&format!("{} {}\n", x, self.signs[x]));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "missing header line".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected 'n k', got {:?}", header),
            });
        }
        let n: usize = fields[0].parse().map_err(|_| Error::Parse {
            line: 1,
            msg: "bad element count".into(),
        })?;
        let k: usize = fields[1].parse().map_err(|_| Error::Parse {
            line: 1,
            msg: "bad domain size".into(),
        })?;
        let mut chi = Coloring::new(n);
        for j in 0..k {
            let line_no = j + 2;
            let line = lines.next().ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "missing sign line".into(),
            })?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected 'x sign', got {:?}", line),
                });
            }
            let x: usize = fields[0].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: "bad element index".into(),
            })?;
            let s: i8 = fields[1].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: "bad sign".into(),
            })?;
            if x >= n || (s != 1 && s != -1) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("invalid entry '{} {}'", x, s),
                });
            }
            chi.set(x, s);
        }
        Ok(chi)
    }
}

/// Convenience constructor for the triangle system used across tests:
/// three elements, sets `{0,1}, {1,2}, {0,2}`.
#[cfg(test)]
pub fn triangle() -> SetSystem {
    SetSystem::new(3, vec![vec![0, 2], vec![0, 1], vec![1, 2]]).unwrap()
}
