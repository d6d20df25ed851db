//! Machine-readable verification reports: one JSON object per line, or CSV
//! with the same columns. Identical runs produce byte-identical output.

use serde::Serialize;

/// Significant digits carried by every decimal field (contract: >= 30).
pub const REPORT_DIGITS: u32 = 33;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    CotTheorem,
    TanTheorem,
    CscTheorem,
    SinTheorem,
    WangMaillet,
    GuoPrimeCot,
    GuoPrimeTan,
    CscCp,
    SunTanScan,
    Spectral,
    SignConsistency,
}

impl Identity {
    pub const ALL: [Identity; 11] = [
        Identity::CotTheorem,
        Identity::TanTheorem,
        Identity::CscTheorem,
        Identity::SinTheorem,
        Identity::WangMaillet,
        Identity::GuoPrimeCot,
        Identity::GuoPrimeTan,
        Identity::CscCp,
        Identity::SunTanScan,
        Identity::Spectral,
        Identity::SignConsistency,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::CotTheorem => "cot-theorem",
            Identity::TanTheorem => "tan-theorem",
            Identity::CscTheorem => "csc-theorem",
            Identity::SinTheorem => "sin-theorem",
            Identity::WangMaillet => "wang-maillet",
            Identity::GuoPrimeCot => "guo-prime-cot",
            Identity::GuoPrimeTan => "guo-prime-tan",
            Identity::CscCp => "csc-cp",
            Identity::SunTanScan => "sun-tan-scan",
            Identity::Spectral => "spectral",
            Identity::SignConsistency => "sign-consistency",
        }
    }

    pub fn parse(s: &str) -> Option<Identity> {
        Identity::ALL.iter().copied().find(|i| i.name() == s)
    }

    /// Whether the identity is defined at this n (scan skips inapplicable n).
    pub fn applicable(&self, n: u64) -> bool {
        if n < 3 {
            return false;
        }
        match self {
            Identity::CotTheorem | Identity::SinTheorem | Identity::Spectral => true,
            Identity::TanTheorem
            | Identity::CscTheorem
            | Identity::WangMaillet
            | Identity::SunTanScan
            | Identity::SignConsistency => n % 2 == 1,
            Identity::GuoPrimeCot | Identity::GuoPrimeTan | Identity::CscCp => {
                n % 2 == 1 && trigdet_core::arith::factorize(n).is_prime()
            }
        }
    }
}

impl std::fmt::Display for Identity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// Per-identity verification record. All non-integer numerics are decimal
/// strings with at least 30 significant digits.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub identity: Identity,
    pub n: u64,
    pub lhs: String,
    pub rhs: String,
    pub abs_err: String,
    pub rel_err: String,
    pub precision_bits: u32,
    pub status: Status,
    pub detail: String,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub fn to_json_lines(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("report serialization is infallible"));
        out.push('\n');
    }
    out
}

const CSV_HEADER: &str = "identity,n,lhs,rhs,abs_err,rel_err,precision_bits,status,detail";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let row = [
            r.identity.name().to_string(),
            r.n.to_string(),
            csv_field(&r.lhs),
            csv_field(&r.rhs),
            csv_field(&r.abs_err),
            csv_field(&r.rel_err),
            r.precision_bits.to_string(),
            r.status.name().to_string(),
            csv_field(&r.detail),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
