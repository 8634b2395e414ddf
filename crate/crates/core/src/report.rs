//! Line-oriented run reports: one record per check, big integers as
//! decimal strings, intervals as endpoint pairs. Records are emitted in key
//! order so identical runs give identical bytes.

use std::fmt;

use crate::constants::Verdict;
use crate::exact::rational::to_decimal;
use crate::exact::{IntervalReal, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Certified,
    Violated,
    Indeterminate,
    HypothesisUnmet,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Certified => "certified",
            Status::Violated => "violated",
            Status::Indeterminate => "indeterminate",
            Status::HypothesisUnmet => "hypothesis-unmet",
        }
    }

    pub fn from_verdict(v: Verdict) -> Status {
        match v {
            Verdict::Holds => Status::Certified,
            Verdict::Fails => Status::Violated,
            Verdict::Indeterminate => Status::Indeterminate,
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Certified
        } else {
            Status::Violated
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub key: String,
    pub status: Option<Status>,
    pub fields: Vec<(String, String)>,
}

impl Record {
    /// A check with a status.
    pub fn check(key: impl Into<String>, status: Status) -> Self {
        Record { key: key.into(), status: Some(status), fields: Vec::new() }
    }

    /// A value-only record.
    pub fn value(key: impl Into<String>) -> Self {
        Record { key: key.into(), status: None, fields: Vec::new() }
    }

    pub fn field(mut self, name: &str, value: impl ToString) -> Self {
        self.fields.push((name.to_string(), value.to_string()));
        self
    }

    pub fn interval(self, name: &str, x: &IntervalReal, digits: usize) -> Self {
        self.field(name, fmt_interval(x, digits))
    }
}

pub fn fmt_interval(x: &IntervalReal, digits: usize) -> String {
    let (lo, hi) = x.to_decimal_pair(digits);
    format!("[{lo},{hi}]")
}

pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_decimal(x: &Rational, digits: usize) -> String {
    to_decimal(x, digits)
}

fn quote(v: &str) -> String {
    if !v.is_empty() && !v.contains(|c: char| c.is_whitespace() || c == '"') {
        v.to_string()
    } else {
        format!("{:?}", v)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunReport {
    pub command: String,
    pub config: Vec<(String, String)>,
    pub records: Vec<Record>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport { command: command.into(), ..Default::default() }
    }

    pub fn config(mut self, name: &str, value: impl ToString) -> Self {
        self.config.push((name.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn count(&self, s: Status) -> usize {
        self.records.iter().filter(|r| r.status == Some(s)).count()
    }

    /// `0` unless some check is violated.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Violated) > 0 {
            1
        } else {
            0
        }
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command {}", quote(&self.command))?;
        write!(f, "config")?;
        for (k, v) in &self.config {
            write!(f, " {k}={}", quote(v))?;
        }
        writeln!(f)?;
        let mut recs: Vec<&Record> = self.records.iter().collect();
        recs.sort_by(|a, b| a.key.cmp(&b.key));
        for r in recs {
            match r.status {
                Some(s) => write!(f, "check {} status={s}", quote(&r.key))?,
                None => write!(f, "value {}", quote(&r.key))?,
            }
            for (k, v) in &r.fields {
                write!(f, " {k}={}", quote(v))?;
            }
            writeln!(f)?;
        }
        writeln!(
            f,
            "summary certified={} violated={} indeterminate={} hypothesis-unmet={}",
            self.count(Status::Certified),
            self.count(Status::Violated),
            self.count(Status::Indeterminate),
            self.count(Status::HypothesisUnmet)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn rendering_is_sorted_and_quoted() {
        let mut r = RunReport::new("gpade test").config("precision", 128);
        r.push(Record::check("b", Status::Violated).field("x", rat(1, 3).to_string()));
        r.push(Record::check("a", Status::Certified).field("note", "two words"));
        let s = r.to_string();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "command \"gpade test\"");
        assert_eq!(lines[1], "config precision=128");
        assert_eq!(lines[2], "check a status=certified note=\"two words\"");
        assert_eq!(lines[3], "check b status=violated x=1/3");
        assert_eq!(lines[4], "summary certified=1 violated=1 indeterminate=0 hypothesis-unmet=0");
        assert_eq!(r.exit_code(), 1);
    }
}
