//! Executable PIR schemes with exact reconstruction, access accounting and
//! privacy audits.
//!
//! All randomness is an explicit input. A run produces a [`Transcript`]
//! holding every query, response and the symbols each server read, from
//! which [`access_report`] derives the total access complexity.

mod audit;
mod database;
mod restricted;
mod schemes;
mod store;
mod trials;

pub use audit::{enumerate_randomness, privacy_audit, randomness_space, AUDIT_LIMIT};
pub use database::Database;
pub use restricted::{
    greedy_restricted_design, verify_restricted_design, DesignReport, RestrictedDesign,
    DESIGN_WORK_BOUND,
};
pub use schemes::{
    run_scheme, scheme_bep, scheme_mds32, scheme_queries, scheme_replicated, scheme_two_server,
};
pub use store::{Backend, SymbolStore};
pub use trials::{draw_randomness, mds_query_shape, ShapeStats};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::bounds::ratio_to_f64;
use crate::covercode::Answer;
use crate::error::{Error, Result};
use crate::gf2::BitVec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeId {
    /// Two replicated servers queried with `a` and `a + e_f`.
    TwoServer,
    /// `N` replicated servers, files split into `N - 1` substrings.
    Replicated,
    /// Three servers holding `x_1`, `x_2`, `x_1 + x_2` of each file.
    Mds32,
    /// Shift-based queries over `Z_N`, at most one substring per file.
    Bep,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] = [
        SchemeId::TwoServer,
        SchemeId::Replicated,
        SchemeId::Mds32,
        SchemeId::Bep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::TwoServer => "two-server",
            SchemeId::Replicated => "replicated",
            SchemeId::Mds32 => "mds32",
            SchemeId::Bep => "bep",
        }
    }

    /// Server count, given the requested `n` for the schemes where it varies.
    pub fn server_count(self, n: usize) -> usize {
        match self {
            SchemeId::TwoServer => 2,
            SchemeId::Mds32 => 3,
            SchemeId::Replicated | SchemeId::Bep => n,
        }
    }

    /// Number of substrings each file is cut into.
    pub fn parts(self, n: usize) -> usize {
        match self {
            SchemeId::TwoServer => 1,
            SchemeId::Mds32 => 2,
            SchemeId::Replicated | SchemeId::Bep => n.saturating_sub(1),
        }
    }

    /// Independent substrings per server, i.e. the redundancy a coded backend needs.
    pub fn symbols_per_server(self, n: usize, m: usize) -> usize {
        match self {
            SchemeId::TwoServer | SchemeId::Mds32 => m,
            SchemeId::Replicated | SchemeId::Bep => n.saturating_sub(1) * m,
        }
    }

    /// Rate `L / download` the scheme is designed for.
    pub fn design_rate(self, n: usize) -> Ratio<u64> {
        match self {
            SchemeId::TwoServer => Ratio::new(1, 2),
            SchemeId::Mds32 => Ratio::new(1, 3),
            SchemeId::Replicated | SchemeId::Bep => Ratio::new(n as u64 - 1, n as u64),
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::param(format!("unknown scheme {s:?}")))
    }
}

/// The user's random choices for one run.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Randomness {
    /// `a` for the two-server scheme, `v` for the replicated scheme.
    Vector(BitVec),
    /// `(a, b)` for the three-server coded scheme.
    Pair(BitVec, BitVec),
    /// `z` in `Z_N^M` for the shift scheme.
    Shifts(Vec<usize>),
}

/// What a single server receives for one sub-query.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Query {
    /// Coefficients of a linear combination of the server's substrings.
    Linear(BitVec),
    /// Per-file substring indices, 0 meaning the file is left out.
    Shifts(Vec<usize>),
}

impl Query {
    /// Hex form: a linear query packs its bits MSB first; a shift query uses
    /// one byte per file.
    pub fn to_hex(&self) -> String {
        match self {
            Query::Linear(v) => v.to_hex(),
            Query::Shifts(b) => b.iter().map(|x| format!("{:02x}", x)).collect(),
        }
    }
}

/// Symbols a server read while answering its queries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccessLog {
    pub per_query: Vec<Vec<usize>>,
    pub union: Vec<usize>,
    /// Sum over queries of the number of symbols read.
    pub sum: usize,
    pub symbol_bits: usize,
}

impl AccessLog {
    pub fn from_answers(answers: &[Answer], symbol_bits: usize) -> Self {
        let per_query: Vec<Vec<usize>> = answers.iter().map(|a| a.accessed.clone()).collect();
        let union: BTreeSet<usize> = per_query.iter().flatten().copied().collect();
        AccessLog {
            sum: per_query.iter().map(Vec::len).sum(),
            union: union.into_iter().collect(),
            per_query,
            symbol_bits,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ServerRecord {
    pub queries: Vec<Query>,
    pub responses: Vec<BitVec>,
    pub access: AccessLog,
}

/// A complete run: every query, response and access, plus the reconstruction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub scheme: SchemeId,
    pub files: usize,
    pub file_bits: usize,
    /// Requested file, 1-based.
    pub f: usize,
    pub randomness: Randomness,
    /// Server `n` (1-based) is entry `n - 1`.
    pub servers: Vec<ServerRecord>,
    pub reconstructed: BitVec,
}

impl Transcript {
    pub fn download_bits(&self) -> usize {
        self.servers
            .iter()
            .flat_map(|s| &s.responses)
            .map(BitVec::len)
            .sum()
    }

    /// `L / download` as an exact fraction.
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.file_bits as u64, self.download_bits() as u64)
    }

    pub fn is_correct(&self, db: &Database) -> bool {
        &self.reconstructed == db.file(self.f)
    }

    /// JSON export with hex-encoded queries and responses.
    pub fn to_json(&self) -> serde_json::Value {
        let report = access_report(self);
        let servers: Vec<serde_json::Value> = self
            .servers
            .iter()
            .map(|s| {
                serde_json::json!({
                    "queries": s.queries.iter().map(Query::to_hex).collect::<Vec<_>>(),
                    "responses": s.responses.iter().map(BitVec::to_hex).collect::<Vec<_>>(),
                    "accessed": s.access.per_query,
                    "union": s.access.union,
                })
            })
            .collect();
        serde_json::json!({
            "scheme": self.scheme,
            "f": self.f,
            "files": self.files,
            "file_bits": self.file_bits,
            "servers": servers,
            "delta_sum": report.delta_sum_f64(),
            "delta_union": report.delta_union_f64(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ServerAccess {
    pub sum_symbols: usize,
    pub union_symbols: usize,
    pub sum_bits: usize,
    pub union_bits: usize,
    /// Fractions of the database size `ML`.
    pub sum_fraction: f64,
    pub union_fraction: f64,
}

/// Access totals for a transcript; `delta_*` are in units of `ML` bits.
#[derive(Debug, Clone, PartialEq)]
pub struct AccessReport {
    pub per_server: Vec<ServerAccess>,
    pub delta_sum: Ratio<u64>,
    pub delta_union: Ratio<u64>,
}

impl AccessReport {
    pub fn delta_sum_f64(&self) -> f64 {
        ratio_to_f64(&self.delta_sum)
    }

    pub fn delta_union_f64(&self) -> f64 {
        ratio_to_f64(&self.delta_union)
    }
}

/// Per-server and total access, counting repeated reads once (`union`) or
/// once per query (`sum`).
pub fn access_report(t: &Transcript) -> AccessReport {
    let ml = (t.files * t.file_bits) as u64;
    let mut sum_bits = 0u64;
    let mut union_bits = 0u64;
    let per_server = t
        .servers
        .iter()
        .map(|s| {
            let a = &s.access;
            let sb = a.sum * a.symbol_bits;
            let ub = a.union.len() * a.symbol_bits;
            sum_bits += sb as u64;
            union_bits += ub as u64;
            ServerAccess {
                sum_symbols: a.sum,
                union_symbols: a.union.len(),
                sum_bits: sb,
                union_bits: ub,
                sum_fraction: sb as f64 / ml as f64,
                union_fraction: ub as f64 / ml as f64,
            }
        })
        .collect();
    AccessReport {
        per_server,
        delta_sum: Ratio::new(sum_bits, ml),
        delta_union: Ratio::new(union_bits, ml),
    }
}
