use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Reported for context; never decides the verdict.
    Info,
    /// Not applicable in this configuration.
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportLine {
    pub name: String,
    pub measured: String,
    pub expected: String,
    pub status: Status,
}

impl fmt::Display for ReportLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.name, self.measured, self.status)?;
        if !self.expected.is_empty() {
            write!(f, " [expected {}]", self.expected)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    sections: Vec<(String, Vec<ReportLine>)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn section(&mut self, title: &str) {
        self.sections.push((title.to_string(), Vec::new()));
    }

    fn push(&mut self, line: ReportLine) {
        if self.sections.is_empty() {
            self.section("checks");
        }
        self.sections.last_mut().expect("section exists").1.push(line);
    }

    pub fn line(&mut self, name: impl Into<String>, measured: impl Into<String>, expected: impl Into<String>, status: Status) {
        self.push(ReportLine {
            name: name.into(),
            measured: measured.into(),
            expected: expected.into(),
            status,
        });
    }

    /// PASS/FAIL from `ok`.
    pub fn check(&mut self, name: impl Into<String>, measured: impl Into<String>, expected: impl Into<String>, ok: bool) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.line(name, measured, expected, status);
    }

    pub fn info(&mut self, name: impl Into<String>, measured: impl Into<String>) {
        self.line(name, measured, "", Status::Info);
    }

    pub fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.line(name, reason, "", Status::Skip);
    }

    pub fn extend(&mut self, other: Report) {
        self.sections.extend(other.sections);
    }

    pub fn lines(&self) -> impl Iterator<Item = &ReportLine> {
        self.sections.iter().flat_map(|(_, l)| l)
    }

    pub fn find(&self, name: &str) -> Option<&ReportLine> {
        self.lines().find(|l| l.name == name)
    }

    /// True when no line failed.
    pub fn passed(&self) -> bool {
        self.lines().all(|l| l.status != Status::Fail)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (title, lines) in &self.sections {
            writeln!(f, "== {title} ==")?;
            for l in lines {
                writeln!(f, "{l}")?;
            }
            writeln!(f)?;
        }
        let failed = self.lines().filter(|l| l.status == Status::Fail).count();
        if failed == 0 {
            writeln!(f, "verdict: PASS")
        } else {
            writeln!(f, "verdict: FAIL ({failed} failed)")
        }
    }
}

/// Fixed-format number: scientific below 1e-3 or at/above 1e6 in magnitude.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if !v.is_finite() {
        format!("{v}")
    } else if v.abs() < 1e-3 || v.abs() >= 1e6 {
        format!("{v:.6e}")
    } else {
        format!("{v:.6}")
    }
}
