//! Append-only store for evaluated designs. Every true-cost evaluation made
//! by a run lands here in evaluation order, tagged with how it came to exist
//! (freshly generated or injected from an external archive) and which split
//! of the current train/validation/test partition it belongs to.
//!
//! The on-disk form is a plain CSV with the header
//! `eval_index,p_0..p_{n-1},o_0..o_{m-1},split,provenance` and floats printed
//! with 17 significant digits, so a write/read cycle reproduces the in-memory
//! bank exactly.

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::Result;
use crate::invalid_arg;

/// Which part of the current data partition an entry belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    Train,
    Valid,
    Test,
    /// Not yet assigned to any partition (fresh entries, raw archives).
    Unassigned,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
            Split::Unassigned => "unassigned",
        }
    }

    pub fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "valid" => Ok(Split::Valid),
            "test" => Ok(Split::Test),
            "unassigned" => Ok(Split::Unassigned),
            other => Err(crate::Error::Parse(format!("unknown split label {other:?}"))),
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How an entry entered the bank.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Evaluated by this run itself.
    Generated,
    /// Consumed from a pre-existing archive in its original order.
    Injected,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Generated => "generated",
            Provenance::Injected => "injected",
        }
    }

    pub fn from_str(s: &str) -> Result<Self> {
        match s {
            "generated" => Ok(Provenance::Generated),
            "injected" => Ok(Provenance::Injected),
            other => Err(crate::Error::Parse(format!(
                "unknown provenance label {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluated design: parameters, objectives, and bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct BankEntry {
    pub eval_index: usize,
    pub p: Vec<f64>,
    pub o: Vec<f64>,
    pub split: Split,
    pub provenance: Provenance,
}

/// The bank itself. Entries only accumulate; a pushed `(p, o)` pair is never
/// rewritten, only its split label may change when the partition is redrawn.
#[derive(Clone, Debug, PartialEq)]
pub struct DataBank {
    n_pars: usize,
    n_objectives: usize,
    entries: Vec<BankEntry>,
}

impl DataBank {
    pub fn new(n_pars: usize, n_objectives: usize) -> Result<Self> {
        if n_pars == 0 || n_objectives == 0 {
            return Err(invalid_arg!("bank dimensions must be positive"));
        }
        Ok(DataBank {
            n_pars,
            n_objectives,
            entries: Vec::new(),
        })
    }

    pub fn n_pars(&self) -> usize {
        self.n_pars
    }

    pub fn n_objectives(&self) -> usize {
        self.n_objectives
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BankEntry] {
        &self.entries
    }

    /// Appends one evaluation; the entry's index is the current length, so
    /// indices are consecutive and strictly increasing.
    pub fn push(&mut self, p: Vec<f64>, o: Vec<f64>, provenance: Provenance) -> Result<()> {
        if p.len() != self.n_pars || o.len() != self.n_objectives {
            return Err(invalid_arg!(
                "entry dimensions {}x{} do not match bank {}x{}",
                p.len(),
                o.len(),
                self.n_pars,
                self.n_objectives
            ));
        }
        self.entries.push(BankEntry {
            eval_index: self.entries.len(),
            p,
            o,
            split: Split::Unassigned,
            provenance,
        });
        Ok(())
    }

    /// Relabels the partition: `order` is a permutation of all entry indices;
    /// its first 75% (floored) become training data, the next 15% (floored)
    /// validation, and the remainder test.
    pub fn assign_splits(&mut self, order: &[usize]) -> Result<()> {
        let n = self.entries.len();
        if order.len() != n {
            return Err(invalid_arg!("permutation length {} != bank {}", order.len(), n));
        }
        let mut seen = vec![false; n];
        for &i in order {
            if i >= n || seen[i] {
                return Err(invalid_arg!("order is not a permutation of the bank"));
            }
            seen[i] = true;
        }
        let n_train = (3 * n) / 4;
        let n_valid = (3 * n) / 20;
        for (pos, &i) in order.iter().enumerate() {
            self.entries[i].split = if pos < n_train {
                Split::Train
            } else if pos < n_train + n_valid {
                Split::Valid
            } else {
                Split::Test
            };
        }
        Ok(())
    }

    /// Entry indices carrying the given split label, in bank order.
    pub fn split_indices(&self, split: Split) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.split == split)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "eval_index")?;
        for i in 0..self.n_pars {
            write!(w, ",p_{i}")?;
        }
        for j in 0..self.n_objectives {
            write!(w, ",o_{j}")?;
        }
        writeln!(w, ",split,provenance")?;
        for e in &self.entries {
            write!(w, "{}", e.eval_index)?;
            for v in &e.p {
                write!(w, ",{v:.16e}")?;
            }
            for v in &e.o {
                write!(w, ",{v:.16e}")?;
            }
            writeln!(w, ",{},{}", e.split, e.provenance)?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        let headers = reader
            .headers()
            .map_err(|e| crate::Error::Parse(format!("bank header: {e}")))?
            .clone();
        let cols: Vec<&str> = headers.iter().collect();
        if cols.len() < 4 || cols[0] != "eval_index" {
            return Err(crate::Error::Parse(
                "bank header must start with eval_index and carry p_/o_ columns".into(),
            ));
        }
        let n_pars = cols.iter().filter(|c| c.starts_with("p_")).count();
        let n_objectives = cols.iter().filter(|c| c.starts_with("o_")).count();
        if n_pars == 0 || n_objectives == 0 {
            return Err(crate::Error::Parse("bank header has no p_/o_ columns".into()));
        }
        let mut expected = vec!["eval_index".to_string()];
        for i in 0..n_pars {
            expected.push(format!("p_{i}"));
        }
        for j in 0..n_objectives {
            expected.push(format!("o_{j}"));
        }
        expected.push("split".into());
        expected.push("provenance".into());
        if cols != expected.iter().map(String::as_str).collect::<Vec<_>>() {
            return Err(crate::Error::Parse(format!(
                "bank header {cols:?} out of order; expected {expected:?}"
            )));
        }

        let mut bank = DataBank::new(n_pars, n_objectives)?;
        let mut last_index: Option<usize> = None;
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| {
                crate::Error::Parse(format!("bank row {}: {e}", line + 2))
            })?;
            if record.len() != expected.len() {
                return Err(crate::Error::Parse(format!(
                    "bank row {}: {} fields, expected {}",
                    line + 2,
                    record.len(),
                    expected.len()
                )));
            }
            let field = |idx: usize| -> &str { record.get(idx).unwrap() };
            let eval_index: usize = field(0).parse().map_err(|e| {
                crate::Error::Parse(format!("bank row {}: eval_index: {e}", line + 2))
            })?;
            if let Some(prev) = last_index {
                if eval_index <= prev {
                    return Err(crate::Error::Parse(format!(
                        "bank row {}: eval_index {eval_index} not increasing",
                        line + 2
                    )));
                }
            }
            last_index = Some(eval_index);
            let parse_f = |idx: usize| -> Result<f64> {
                field(idx).parse::<f64>().map_err(|e| {
                    crate::Error::Parse(format!("bank row {}, column {}: {e}", line + 2, idx))
                })
            };
            let mut p = Vec::with_capacity(n_pars);
            for i in 0..n_pars {
                p.push(parse_f(1 + i)?);
            }
            let mut o = Vec::with_capacity(n_objectives);
            for j in 0..n_objectives {
                o.push(parse_f(1 + n_pars + j)?);
            }
            let split = Split::from_str(field(1 + n_pars + n_objectives))?;
            let provenance = Provenance::from_str(field(2 + n_pars + n_objectives))?;
            bank.entries.push(BankEntry {
                eval_index,
                p,
                o,
                split,
                provenance,
            });
        }
        Ok(bank)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path)?;
        self.write_csv(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path)?;
        Self::read_csv(file)
    }
}
