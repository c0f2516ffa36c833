//! Analytic computation, communication and signaling costs for GSFL and
//! five baseline schemes.
//!
//! Computation is carried in whole microseconds ([`Micros`]) so that sums
//! like `80.6 + 999 * 46.571` come out exact. Per-operation unit costs are
//! inputs ([`UnitCosts`]); the defaults are the published benchmark figures.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("iteration count must be at least 1")]
    InvalidIterations,
    #[error("need m >= n >= 1, got m={m}, n={n}")]
    InvalidCounts { m: u64, n: u64 },
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
    #[error("cost overflows 64 bits")]
    Overflow,
}

/// A duration in microseconds (one thousandth of a millisecond).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct Micros(pub u64);

impl Micros {
    pub fn as_ms(self) -> f64 {
        self.0 as f64 / 1000.0
    }

    pub fn as_secs(self) -> f64 {
        self.0 as f64 / 1_000_000.0
    }

    fn times(self, k: u64) -> Result<Micros, CostError> {
        self.0.checked_mul(k).map(Micros).ok_or(CostError::Overflow)
    }

    fn plus(self, other: Micros) -> Result<Micros, CostError> {
        self.0
            .checked_add(other.0)
            .map(Micros)
            .ok_or(CostError::Overflow)
    }

    /// Round half up to a multiple of `step`.
    pub fn round_to(self, step: Micros) -> Micros {
        Micros((self.0 + step.0 / 2) / step.0 * step.0)
    }
}

impl std::ops::Add for Micros {
    type Output = Micros;
    fn add(self, rhs: Micros) -> Micros {
        Micros(self.0 + rhs.0)
    }
}

impl std::ops::Mul<u64> for Micros {
    type Output = Micros;
    fn mul(self, rhs: u64) -> Micros {
        Micros(self.0 * rhs)
    }
}

/// Prints as milliseconds with three decimals, e.g. `46605.029`.
impl fmt::Display for Micros {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:03}", self.0 / 1000, self.0 % 1000)
    }
}

/// Per-operation costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitCosts {
    /// AES encryption.
    pub aes: Micros,
    /// Addition or subtraction.
    pub add_sub: Micros,
    /// Bilinear pairing.
    pub pairing: Micros,
    /// Modular division.
    pub div: Micros,
    /// Exponentiation.
    pub exp: Micros,
    /// Hash.
    pub hash: Micros,
    /// Modular reduction.
    pub modulo: Micros,
    /// Multiplication.
    pub mul: Micros,
    /// Point multiplication.
    pub point_mul: Micros,
    /// Random number generation.
    pub rand: Micros,
    /// Exclusive-or.
    pub xor: Micros,
}

impl UnitCosts {
    /// Per-operation timings of the reference benchmark.
    pub const REFERENCE: UnitCosts = UnitCosts {
        aes: Micros(161),
        add_sub: Micros(1),
        pairing: Micros(4510),
        div: Micros(1220),
        exp: Micros(1000),
        hash: Micros(67),
        modulo: Micros(1240),
        mul: Micros(612),
        point_mul: Micros(1250),
        rand: Micros(45),
        xor: Micros(2),
    };
}

impl Default for UnitCosts {
    fn default() -> Self {
        UnitCosts::REFERENCE
    }
}

/// The six schemes in the comparison tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    RunhuaXu,
    Chai,
    Bonawitz,
    Sun,
    Xu,
    Gsfl,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::RunhuaXu,
        Algorithm::Chai,
        Algorithm::Bonawitz,
        Algorithm::Sun,
        Algorithm::Xu,
        Algorithm::Gsfl,
    ];
    pub const BASELINES: [Algorithm; 5] = [
        Algorithm::RunhuaXu,
        Algorithm::Chai,
        Algorithm::Bonawitz,
        Algorithm::Sun,
        Algorithm::Xu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::RunhuaXu => "RunhuaXu",
            Algorithm::Chai => "Chai",
            Algorithm::Bonawitz => "Bonawitz",
            Algorithm::Sun => "Sun",
            Algorithm::Xu => "Xu",
            Algorithm::Gsfl => "GSFL",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = CostError;

    /// Case-insensitive; `-` and `_` are ignored.
    fn from_str(s: &str) -> Result<Self, CostError> {
        let key: String = s
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .collect::<String>()
            .to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().to_ascii_lowercase() == key)
            .ok_or_else(|| CostError::UnknownAlgorithm(s.to_string()))
    }
}

/// Every intermediate term of the GSFL computation cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GsflBreakdown {
    pub admin: Micros,
    pub c3: Micros,
    pub bv: Micros,
    pub sv: Micros,
    pub ch: Micros,
    pub sig: Micros,
    pub enc: Micros,
    pub client: Micros,
    pub dec: Micros,
    pub bv_tilde: Micros,
    pub ver: Micros,
    pub agg: Micros,
    pub server: Micros,
    /// `admin + client + server` without rounding.
    pub first_exact: Micros,
    /// `first_exact` rounded to [`FIRST_ITERATION_ROUNDING`], the figure
    /// that the published per-t totals build on.
    pub first_published: Micros,
    /// `enc + dec + ver + agg`.
    pub subsequent: Micros,
}

/// Granularity of the published first-iteration total (0.1 ms).
pub const FIRST_ITERATION_ROUNDING: Micros = Micros(100);

pub fn gsfl_breakdown(u: &UnitCosts) -> GsflBreakdown {
    let admin = u.div + u.exp * 3 + u.rand * 2;
    let c3 = u.exp + u.mul + u.add_sub;
    let bv = u.exp * 9 + u.pairing * 3 + u.mul * 4;
    let sv = u.add_sub * 5 + u.mul * 5;
    let ch = u.hash;
    let sig = c3 + bv + sv + ch;
    let enc = u.exp * 2 + u.mul;
    let client = sig + enc;
    let dec = u.exp * 2 + u.mul + u.add_sub;
    let bv_tilde = u.mul * 8 + u.exp * 12 + u.pairing * 5 + u.div;
    let ver = bv_tilde + u.hash;
    let agg = u.add_sub + u.mul;
    let server = dec + ver + agg;
    let first_exact = admin + client + server;
    GsflBreakdown {
        admin,
        c3,
        bv,
        sv,
        ch,
        sig,
        enc,
        client,
        dec,
        bv_tilde,
        ver,
        agg,
        server,
        first_exact,
        first_published: first_exact.round_to(FIRST_ITERATION_ROUNDING),
        subsequent: enc + dec + ver + agg,
    }
}

/// `first_published + (t - 1) * subsequent`.
pub fn gsfl_computation(t: u64, u: &UnitCosts) -> Result<Micros, CostError> {
    if t == 0 {
        return Err(CostError::InvalidIterations);
    }
    let b = gsfl_breakdown(u);
    b.subsequent.times(t - 1)?.plus(b.first_published)
}

/// Client-to-client key exchange: one exponentiation per ordered pair.
fn pairwise_exchange(n: u64, u: &UnitCosts) -> Result<Micros, CostError> {
    let pairs = n
        .checked_mul(n.saturating_sub(1))
        .ok_or(CostError::Overflow)?;
    u.exp.times(pairs)
}

/// One iteration of a baseline scheme with `n` participants.
pub fn baseline_per_iteration(alg: Algorithm, n: u64, u: &UnitCosts) -> Result<Micros, CostError> {
    if n == 0 {
        return Err(CostError::InvalidCounts { m: n, n });
    }
    let b = gsfl_breakdown(u);
    let (enc, dec, agg) = (b.enc, b.dec, b.agg);
    let round_trip = enc + dec;
    let per_client_plain = round_trip + agg;
    match alg {
        Algorithm::RunhuaXu => round_trip.plus(per_client_plain.times(n)?),
        Algorithm::Chai => round_trip.plus((round_trip * 3 + agg).times(n)?),
        Algorithm::Bonawitz => round_trip
            .plus(pairwise_exchange(n, u)?)?
            .plus(per_client_plain.times(n)?),
        Algorithm::Sun => {
            let pairs = n.checked_mul(n - 1).ok_or(CostError::Overflow)? / 100;
            round_trip
                .plus(u.exp.times(pairs)?)?
                .plus(per_client_plain.times(n)?)
        }
        Algorithm::Xu => pairwise_exchange(n, u)?.plus(agg + enc * 2 + dec * 2),
        Algorithm::Gsfl => Err(CostError::UnknownAlgorithm(alg.name().to_string())),
    }
}

/// `t` iterations of a baseline scheme.
pub fn baseline_computation(
    alg: Algorithm,
    t: u64,
    n: u64,
    u: &UnitCosts,
) -> Result<Micros, CostError> {
    if t == 0 {
        return Err(CostError::InvalidIterations);
    }
    baseline_per_iteration(alg, n, u)?.times(t)
}

/// Computation cost for any of the six schemes.
pub fn computation(alg: Algorithm, t: u64, n: u64, u: &UnitCosts) -> Result<Micros, CostError> {
    match alg {
        Algorithm::Gsfl => gsfl_computation(t, u),
        _ => baseline_computation(alg, t, n, u),
    }
}

/// Bytes a client sends per iteration.
///
/// GSFL sends two 345-byte messages (request and update). Sun's figure
/// derives as 362.7 and is published rounded to 363. Bonawitz and Runhua Xu
/// send one 135-byte server message plus 99 payload-free 23-byte messages
/// to peers.
pub fn communication_per_iteration(alg: Algorithm) -> u64 {
    match alg {
        Algorithm::Gsfl => 2 * message_size_table().whole_bytes,
        Algorithm::RunhuaXu => 2412,
        Algorithm::Chai => 603,
        Algorithm::Bonawitz => 2412,
        Algorithm::Sun => 363,
        Algorithm::Xu => 712,
    }
}

pub fn communication(alg: Algorithm, t: u64) -> Result<u64, CostError> {
    if t == 0 {
        return Err(CostError::InvalidIterations);
    }
    communication_per_iteration(alg)
        .checked_mul(t)
        .ok_or(CostError::Overflow)
}

/// Total protocol messages over `t` iterations with `m` clients in the
/// network and `n` selected per iteration.
pub fn signaling(alg: Algorithm, t: u64, m: u64, n: u64) -> Result<u64, CostError> {
    if n == 0 || m < n {
        return Err(CostError::InvalidCounts { m, n });
    }
    if t == 0 {
        return Err(CostError::InvalidIterations);
    }
    let of = || CostError::Overflow;
    let n_sq = n.checked_mul(n).ok_or_else(of)?;
    let (setup_rounds, per_iteration) = match alg {
        Algorithm::Gsfl => (4, 2 * n + 1),
        Algorithm::RunhuaXu => (4, 3 * n + 1),
        Algorithm::Chai => (3, 4 * n + 1),
        Algorithm::Bonawitz | Algorithm::Xu => (3, n_sq.checked_add(n + 1).ok_or_else(of)?),
        Algorithm::Sun => (2, (n_sq - n) / 100 + n),
    };
    let setup = m.checked_mul(setup_rounds).ok_or_else(of)?;
    per_iteration
        .checked_mul(t)
        .and_then(|x| x.checked_add(setup))
        .ok_or_else(of)
}

/// Bit widths of the wire message fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MessageSizeTable {
    pub fields: [(&'static str, u64); 7],
    pub total_bits: u64,
    /// Total bits divided by eight, truncated.
    pub whole_bytes: u64,
    pub exact_bytes: f64,
}

pub fn message_size_table() -> MessageSizeTable {
    let fields = [
        ("GID", 16),
        ("MID", 16),
        ("RAND", 128),
        ("Payload", 1024),
        ("GS", 1539),
        ("TTL", 8),
        ("TS", 32),
    ];
    let total_bits: u64 = fields.iter().map(|(_, b)| b).sum();
    MessageSizeTable {
        fields,
        total_bits,
        whole_bytes: total_bits / 8,
        exact_bytes: total_bits as f64 / 8.0,
    }
}

/// One row of the comparison tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub algorithm: String,
    pub t: u64,
    pub m: u64,
    pub n: u64,
    pub computation_ms: f64,
    pub communication_bytes: u64,
    pub signaling_count: u64,
}

pub fn report(
    alg: Algorithm,
    t: u64,
    m: u64,
    n: u64,
    u: &UnitCosts,
) -> Result<CostReport, CostError> {
    Ok(CostReport {
        algorithm: alg.name().to_string(),
        t,
        m,
        n,
        computation_ms: computation(alg, t, n, u)?.as_ms(),
        communication_bytes: communication(alg, t)?,
        signaling_count: signaling(alg, t, m, n)?,
    })
}

/// Rows for all six schemes, baselines first.
pub fn all_reports(t: u64, m: u64, n: u64, u: &UnitCosts) -> Result<Vec<CostReport>, CostError> {
    Algorithm::ALL
        .iter()
        .map(|a| report(*a, t, m, n, u))
        .collect()
}

pub fn write_reports_csv<W: Write>(rows: &[CostReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn reports_to_json(rows: &[CostReport]) -> serde_json::Result<String> {
    serde_json::to_string_pretty(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    const U: UnitCosts = UnitCosts::REFERENCE;

    #[test]
    fn breakdown_terms() {
        let b = gsfl_breakdown(&U);
        assert_eq!(b.admin, Micros(4310));
        assert_eq!(b.sig, Micros(29723));
        assert_eq!(b.enc, Micros(2612));
        assert_eq!(b.client, Micros(32335));
        assert_eq!(b.dec, Micros(2613));
        assert_eq!(b.ver, Micros(40733));
        assert_eq!(b.agg, Micros(613));
        assert_eq!(b.server, Micros(43959));
        assert_eq!(b.first_exact, Micros(80604));
        assert_eq!(b.first_published, Micros(80600));
        assert_eq!(b.subsequent, Micros(46571));
        assert!(b.subsequent < b.first_published);
    }

    #[test]
    fn gsfl_totals() {
        let ms = |t| gsfl_computation(t, &U).unwrap().to_string();
        assert_eq!(ms(1), "80.600");
        assert_eq!(ms(50), "2362.579");
        assert_eq!(ms(1000), "46605.029");
        assert_eq!(gsfl_computation(0, &U), Err(CostError::InvalidIterations));
    }

    #[test]
    fn baseline_examples() {
        let per = |a| baseline_per_iteration(a, 100, &U).unwrap().to_string();
        assert_eq!(per(Algorithm::RunhuaXu), "589.025");
        assert_eq!(per(Algorithm::Chai), "1634.025");
        assert_eq!(per(Algorithm::Bonawitz), "10489.025");
        assert_eq!(per(Algorithm::Sun), "688.025");
        assert_eq!(per(Algorithm::Xu), "9911.063");
        assert!(matches!(
            baseline_computation(Algorithm::Gsfl, 1, 100, &U),
            Err(CostError::UnknownAlgorithm(_))
        ));
    }

    #[test]
    fn signaling_examples() {
        assert_eq!(signaling(Algorithm::Gsfl, 1, 200, 100), Ok(1001));
        assert_eq!(signaling(Algorithm::Gsfl, 1000, 200, 100), Ok(201_800));
        assert_eq!(signaling(Algorithm::Bonawitz, 100, 200, 100), Ok(1_010_700));
        assert_eq!(signaling(Algorithm::Gsfl, 1, 2000, 1000), Ok(10_001));
        assert_eq!(signaling(Algorithm::Bonawitz, 1, 2000, 1000), Ok(1_007_001));
        assert_eq!(
            signaling(Algorithm::Gsfl, 1, 5, 6),
            Err(CostError::InvalidCounts { m: 5, n: 6 })
        );
        assert_eq!(
            signaling(Algorithm::Gsfl, 0, 5, 5),
            Err(CostError::InvalidIterations)
        );
    }

    #[test]
    fn communication_and_sizes() {
        assert_eq!(communication(Algorithm::Gsfl, 1), Ok(690));
        assert_eq!(communication(Algorithm::Sun, 150), Ok(54_450));
        assert_eq!(
            99 * 23 + 135,
            communication_per_iteration(Algorithm::Bonawitz)
        );
        let s = message_size_table();
        assert_eq!(s.total_bits, 2763);
        assert_eq!(s.whole_bytes, 345);
        assert_eq!(s.exact_bytes, 345.375);
    }

    #[test]
    fn monotone_in_t() {
        for alg in Algorithm::ALL {
            let mut prev = report(alg, 1, 200, 100, &U).unwrap();
            for t in 2..40 {
                let r = report(alg, t, 200, 100, &U).unwrap();
                assert!(r.computation_ms >= prev.computation_ms);
                assert!(r.communication_bytes >= prev.communication_bytes);
                assert!(r.signaling_count >= prev.signaling_count);
                prev = r;
            }
        }
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>(), Ok(a));
        }
        assert_eq!("runhua-xu".parse::<Algorithm>(), Ok(Algorithm::RunhuaXu));
        assert!(matches!(
            "foo".parse::<Algorithm>(),
            Err(CostError::UnknownAlgorithm(_))
        ));
    }

    #[test]
    fn export_formats() {
        let rows = all_reports(1000, 200, 100, &U).unwrap();
        let mut buf = Vec::new();
        write_reports_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("algorithm,t,m,n,computation_ms,communication_bytes,signaling_count")
        );
        assert!(text.contains("GSFL,1000,200,100,46605.029,690000,201800"));
        let back: Vec<CostReport> = serde_json::from_str(&reports_to_json(&rows).unwrap()).unwrap();
        assert_eq!(back, rows);
    }
}
