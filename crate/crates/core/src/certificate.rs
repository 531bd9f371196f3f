//! Named equations with a pass/fail status and a witness on failure.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub equation: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Certificate {
    pub fn pass(equation: impl Into<String>) -> Self {
        Self { equation: equation.into(), status: Status::Pass, witness: None }
    }

    pub fn fail(equation: impl Into<String>, witness: impl Into<String>) -> Self {
        Self { equation: equation.into(), status: Status::Fail, witness: Some(witness.into()) }
    }

    /// Pass when `witness` is `None`.
    pub fn check(equation: impl Into<String>, witness: Option<impl fmt::Display>) -> Self {
        match witness {
            None => Self::pass(equation),
            Some(w) => Self::fail(equation, w.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(f, "[{tag}] {}", self.equation)?;
        if let Some(w) = &self.witness {
            write!(f, " -- {w}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CertificateSet {
    pub certificates: Vec<Certificate>,
}

impl CertificateSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Certificate) {
        self.certificates.push(c);
    }

    pub fn extend(&mut self, other: CertificateSet) {
        self.certificates.extend(other.certificates);
    }

    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(Certificate::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Certificate> {
        self.certificates.iter().filter(|c| !c.passed())
    }

    pub fn len(&self) -> usize {
        self.certificates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.certificates.is_empty()
    }
}

impl fmt::Display for CertificateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.certificates {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
