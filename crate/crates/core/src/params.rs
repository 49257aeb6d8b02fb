//! Construction parameters: symbol sets, scales, weights and labels.
//!
//! A configuration fixes an integer `N >= 2`, a sequence of multipliers
//! `m_k` in `{2..N}` (the scales are the partial products
//! `sigma_k = m_1 * ... * m_k`), two finite symbol sets and a table of
//! positive rational weights per symbol. Labels are finite strings over a
//! symbol set, read as infinite strings eventually equal to the end symbol.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of the end symbol in both symbol sets.
pub const END: u8 = 0;
/// Index of the gluing symbol in the first symbol set.
pub const SPADE: u8 = 1;

/// The two symbol alphabets. Symbols are identified by their index:
/// `0` is the shared end symbol, and index `1` of the first set is the
/// gluing symbol. The second set must not contain the gluing symbol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolSets {
    pub sigma1: Vec<String>,
    pub sigma2: Vec<String>,
}

impl SymbolSets {
    /// Default symbol names: `end`, `spade`, `a`, `b`, ... for the first
    /// set and `end`, `t1`, `t2`, ... for the second.
    pub fn with_sizes(n1: usize, n2: usize) -> Result<Self> {
        if n1 < 3 {
            return Err(Error::Config("sigma1 needs at least 3 symbols".into()));
        }
        if n2 < 2 {
            return Err(Error::Config("sigma2 needs at least 2 symbols".into()));
        }
        let mut sigma1 = vec!["end".to_string(), "spade".to_string()];
        for i in 2..n1 {
            sigma1.push(format!("a{}", i - 1));
        }
        let mut sigma2 = vec!["end".to_string()];
        for i in 1..n2 {
            sigma2.push(format!("t{}", i));
        }
        Ok(SymbolSets { sigma1, sigma2 })
    }

    pub fn n1(&self) -> usize {
        self.sigma1.len()
    }

    pub fn n2(&self) -> usize {
        self.sigma2.len()
    }
}

/// Scales `sigma_k` derived from the multipliers `m_k`. Entry `k` of
/// `sigma` is `m_1 * ... * m_k`; `sigma_0 = 1` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleTable {
    pub big_n: u32,
    pub m: Vec<u32>,
    #[serde(skip)]
    sigma: Vec<i64>,
}

impl ScaleTable {
    pub fn new(big_n: u32, m: Vec<u32>) -> Result<Self> {
        if big_n < 2 {
            return Err(Error::Config("N must be >= 2".into()));
        }
        if m.is_empty() {
            return Err(Error::Config("need at least one multiplier m_k".into()));
        }
        for &mk in &m {
            if mk < 2 || mk > big_n {
                return Err(Error::Config(format!(
                    "multiplier {} outside 2..={}",
                    mk, big_n
                )));
            }
        }
        let mut t = ScaleTable {
            big_n,
            m,
            sigma: Vec::new(),
        };
        t.rebuild();
        Ok(t)
    }

    /// Constant multiplier sequence of the given depth.
    pub fn constant(m: u32, depth: usize) -> Result<Self> {
        ScaleTable::new(m.max(2), vec![m; depth])
    }

    pub(crate) fn rebuild(&mut self) {
        self.sigma.clear();
        let mut acc: i64 = 1;
        for &mk in &self.m {
            acc *= mk as i64;
            self.sigma.push(acc);
        }
    }

    /// Number of scales available.
    pub fn depth(&self) -> usize {
        self.sigma.len()
    }

    /// `sigma_k` with `sigma_0 = 1`. Panics if `k` exceeds the table.
    pub fn sigma(&self, k: usize) -> i64 {
        if k == 0 {
            1
        } else {
            self.sigma[k - 1]
        }
    }

    /// Largest `k` with `sigma_k` dividing `|m|`; `0` for `m = 0` or when
    /// no scale divides `|m|`.
    pub fn ord(&self, m: i64) -> usize {
        if m == 0 {
            return 0;
        }
        let a = m.abs();
        let mut best = 0;
        for k in 1..=self.depth() {
            let s = self.sigma(k);
            if s > a {
                break;
            }
            if a % s == 0 {
                best = k;
            }
        }
        best
    }

    /// Discretized logarithm: `0` if `p < sigma_1`, else the largest `k`
    /// with `sigma_k <= p`.
    pub fn disc_log(&self, p: f64) -> usize {
        let p = p.abs();
        let mut best = 0;
        for k in 1..=self.depth() {
            if (self.sigma(k) as f64) <= p {
                best = k;
            } else {
                break;
            }
        }
        best
    }

    /// `disc_log` for integer arguments (exact).
    pub fn disc_log_int(&self, p: i64) -> usize {
        let p = p.abs();
        let mut best = 0;
        for k in 1..=self.depth() {
            if self.sigma(k) <= p {
                best = k;
            } else {
                break;
            }
        }
        best
    }
}

/// Positive rational weights per symbol; the end symbol always has
/// weight one. `s1_sum`/`s2_sum` cache the per-alphabet totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    pub w1: Vec<BigRational>,
    pub w2: Vec<BigRational>,
    s1_sum: BigRational,
    s2_sum: BigRational,
}

impl WeightTable {
    pub fn new(w1: Vec<BigRational>, w2: Vec<BigRational>) -> Result<Self> {
        for w in w1.iter().chain(w2.iter()) {
            if *w <= BigRational::from_integer(BigInt::from(0)) {
                return Err(Error::Config("weights must be positive".into()));
            }
        }
        if !w1[END as usize].is_one() || !w2[END as usize].is_one() {
            return Err(Error::Config("the end symbol must have weight 1".into()));
        }
        let s1_sum = w1.iter().sum();
        let s2_sum = w2.iter().sum();
        Ok(WeightTable {
            w1,
            w2,
            s1_sum,
            s2_sum,
        })
    }

    pub fn unit(n1: usize, n2: usize) -> Self {
        let one = BigRational::one();
        WeightTable::new(vec![one.clone(); n1], vec![one; n2]).unwrap()
    }

    /// Sum of weights over the first alphabet (the measure growth factor
    /// per label entry).
    pub fn s1_sum(&self) -> &BigRational {
        &self.s1_sum
    }

    pub fn s2_sum(&self) -> &BigRational {
        &self.s2_sum
    }

    pub fn w_spade(&self) -> &BigRational {
        &self.w1[SPADE as usize]
    }

    pub fn w1_of(&self, s: u8) -> &BigRational {
        &self.w1[s as usize]
    }

    pub fn w2_of(&self, s: u8) -> &BigRational {
        &self.w2[s as usize]
    }
}

/// A label: finite string of symbol indices, read as an infinite string
/// equal to the end symbol beyond the stored prefix. The canonical form
/// stores no trailing end symbols, so labels can be used as map keys.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Label {
    entries: Vec<u8>,
}

impl Label {
    pub fn empty() -> Self {
        Label::default()
    }

    pub fn from_entries(entries: &[u8]) -> Self {
        let mut v = entries.to_vec();
        while v.last() == Some(&END) {
            v.pop();
        }
        Label { entries: v }
    }

    /// Entry `n` (1-indexed as in the construction); END beyond the prefix.
    pub fn get(&self, n: usize) -> u8 {
        if n == 0 || n > self.entries.len() {
            END
        } else {
            self.entries[n - 1]
        }
    }

    /// Returns a new label with entry `n` (1-indexed) set to `s`.
    pub fn set(&self, n: usize, s: u8) -> Label {
        assert!(n >= 1, "label entries are 1-indexed");
        let mut v = self.entries.clone();
        if n > v.len() {
            v.resize(n, END);
        }
        v[n - 1] = s;
        Label::from_entries(&v)
    }

    /// Length of the stored prefix (largest entry index that is not END).
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// True if entries `1..k` (inclusive) are all the gluing symbol.
    pub fn all_spade_below(&self, k: usize) -> bool {
        (1..k).all(|j| self.get(j) == SPADE)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "-");
        }
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", e)?;
        }
        Ok(())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "-" || s.is_empty() {
            return Ok(Label::empty());
        }
        let mut entries = Vec::new();
        for part in s.split('.') {
            entries.push(
                part.parse::<u8>()
                    .map_err(|_| Error::Config(format!("bad label entry {:?}", part)))?,
            );
        }
        Ok(Label::from_entries(&entries))
    }
}

/// Product of the per-entry weights of a label over the first alphabet.
pub fn label_weight1(l: &Label, w: &WeightTable) -> BigRational {
    let mut acc = BigRational::one();
    for &e in l.entries() {
        acc *= w.w1_of(e);
    }
    acc
}

/// Product of the per-entry weights of a label over the second alphabet.
pub fn label_weight2(l: &Label, w: &WeightTable) -> BigRational {
    let mut acc = BigRational::one();
    for &e in l.entries() {
        acc *= w.w2_of(e);
    }
    acc
}

/// Truncation bounds: labels may differ from END only in entries
/// `1..=depth`, and positions are restricted to `window`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub depth: usize,
    pub window_lo: i64,
    pub window_hi: i64,
}

impl TruncationSpec {
    pub fn new(depth: usize, window_lo: i64, window_hi: i64) -> Self {
        TruncationSpec {
            depth,
            window_lo,
            window_hi,
        }
    }

    pub fn contains(&self, m: i64) -> bool {
        m >= self.window_lo && m <= self.window_hi
    }

    pub fn width(&self) -> i64 {
        self.window_hi - self.window_lo
    }
}

/// The full parameter bundle. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    pub symbols: SymbolSets,
    pub scales: ScaleTable,
    pub weights: WeightTable,
    pub trunc: TruncationSpec,
}

impl Params {
    pub fn new(
        symbols: SymbolSets,
        scales: ScaleTable,
        weights: WeightTable,
        trunc: TruncationSpec,
    ) -> Result<Self> {
        if weights.w1.len() != symbols.n1() || weights.w2.len() != symbols.n2() {
            return Err(Error::Config("weight table sizes must match symbol sets".into()));
        }
        if scales.depth() < trunc.depth {
            return Err(Error::Config(
                "scale table shorter than the truncation depth".into(),
            ));
        }
        if trunc.width() < 2 * scales.sigma(trunc.depth) {
            return Err(Error::Config(
                "window narrower than twice the largest scale".into(),
            ));
        }
        Ok(Params {
            symbols,
            scales,
            weights,
            trunc,
        })
    }

    /// Standard test configuration: constant `m`, unit weights except an
    /// optional gluing-symbol weight, window `[0, window_mult * sigma_K]`.
    pub fn standard(
        m: u32,
        depth: usize,
        n1: usize,
        n2: usize,
        w_spade: Option<BigRational>,
        window_mult: i64,
    ) -> Result<Self> {
        let symbols = SymbolSets::with_sizes(n1, n2)?;
        let scales = ScaleTable::constant(m, depth)?;
        let mut weights = WeightTable::unit(n1, n2);
        if let Some(ws) = w_spade {
            let mut w1 = weights.w1.clone();
            w1[SPADE as usize] = ws;
            weights = WeightTable::new(w1, weights.w2.clone())?;
        }
        let hi = window_mult * scales.sigma(depth);
        let trunc = TruncationSpec::new(depth, 0, hi);
        Params::new(symbols, scales, weights, trunc)
    }

    pub fn sigma(&self, k: usize) -> i64 {
        self.scales.sigma(k)
    }

    pub fn ord(&self, m: i64) -> usize {
        self.scales.ord(m)
    }

    pub fn disc_log(&self, p: f64) -> usize {
        self.scales.disc_log(p)
    }

    pub fn depth(&self) -> usize {
        self.trunc.depth
    }

    pub fn n1(&self) -> usize {
        self.symbols.n1()
    }

    pub fn n2(&self) -> usize {
        self.symbols.n2()
    }

    /// Weight of a label pair: product over both alphabets.
    pub fn pair_weight(&self, lam: &Label, theta: &Label) -> BigRational {
        label_weight1(lam, &self.weights) * label_weight2(theta, &self.weights)
    }
}

/// On-disk configuration (TOML). `m` is either an explicit list or a
/// constant; weights are rational strings like `"1/2"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigFile {
    pub big_n: u32,
    #[serde(default)]
    pub m: Option<Vec<u32>>,
    #[serde(default)]
    pub m_const: Option<u32>,
    pub depth: usize,
    pub sigma1: usize,
    pub sigma2: usize,
    #[serde(default)]
    pub weights1: Option<Vec<String>>,
    #[serde(default)]
    pub weights2: Option<Vec<String>>,
    #[serde(default)]
    pub window_lo: Option<i64>,
    #[serde(default)]
    pub window_hi: Option<i64>,
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad rational {:?}", s)))?;
        let den: BigInt = b
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad rational {:?}", s)))?;
        if den == BigInt::from(0) {
            return Err(Error::Config("zero denominator".into()));
        }
        Ok(BigRational::new(num, den))
    } else {
        let num: BigInt = s
            .parse()
            .map_err(|_| Error::Config(format!("bad rational {:?}", s)))?;
        Ok(BigRational::from_integer(num))
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Params> {
        let cfg: ConfigFile =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse: {}", e)))?;
        cfg.into_params()
    }

    pub fn into_params(self) -> Result<Params> {
        let m = match (self.m, self.m_const) {
            (Some(list), None) => list,
            (None, Some(c)) => vec![c; self.depth.max(1)],
            _ => {
                return Err(Error::Config(
                    "exactly one of `m` (list) or `m_const` must be given".into(),
                ))
            }
        };
        let scales = ScaleTable::new(self.big_n, m)?;
        let symbols = SymbolSets::with_sizes(self.sigma1, self.sigma2)?;
        let w1 = match self.weights1 {
            Some(ws) => {
                if ws.len() != symbols.n1() {
                    return Err(Error::Config("weights1 length mismatch".into()));
                }
                ws.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?
            }
            None => vec![BigRational::one(); symbols.n1()],
        };
        let w2 = match self.weights2 {
            Some(ws) => {
                if ws.len() != symbols.n2() {
                    return Err(Error::Config("weights2 length mismatch".into()));
                }
                ws.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?
            }
            None => vec![BigRational::one(); symbols.n2()],
        };
        let weights = WeightTable::new(w1, w2)?;
        let hi_default = 4 * scales.sigma(self.depth);
        let trunc = TruncationSpec::new(
            self.depth,
            self.window_lo.unwrap_or(0),
            self.window_hi.unwrap_or(hi_default),
        );
        Params::new(symbols, scales, weights, trunc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow2_scales() -> ScaleTable {
        ScaleTable::constant(2, 8).unwrap()
    }

    #[test]
    fn ord_of_zero_is_zero() {
        let t = pow2_scales();
        assert_eq!(t.ord(0), 0);
    }

    #[test]
    fn ord_by_divisibility() {
        let t = pow2_scales();
        // sigma = 2,4,8,...; 12 = 4*3 so ord = 2, 5 has none.
        assert_eq!(t.ord(12), 2);
        assert_eq!(t.ord(5), 0);
        assert_eq!(t.ord(-8), 3);
        // ord(m) >= k iff sigma_k divides |m|, for every k and nonzero m.
        for m in 1..200i64 {
            for k in 1..=6 {
                assert_eq!(t.ord(m) >= k, m % t.sigma(k) == 0, "m={} k={}", m, k);
            }
        }
    }

    #[test]
    fn disc_log_examples() {
        let t = pow2_scales();
        assert_eq!(t.disc_log(1.0), 0);
        assert_eq!(t.disc_log_int(8), 3);
        assert_eq!(t.disc_log_int(7), 2);
        // disc_log(sigma_k) = k, and monotone.
        for k in 1..=6 {
            assert_eq!(t.disc_log_int(t.sigma(k)), k);
        }
        let mut prev = 0;
        for p in 0..300 {
            let d = t.disc_log_int(p);
            assert!(d >= prev);
            prev = d;
        }
    }

    #[test]
    fn label_canonical_form() {
        let l = Label::from_entries(&[1, 0, 2, 0, 0]);
        assert_eq!(l.support_len(), 3);
        assert_eq!(l.get(1), 1);
        assert_eq!(l.get(2), 0);
        assert_eq!(l.get(3), 2);
        assert_eq!(l.get(17), END);
        assert_eq!(l, Label::from_entries(&[1, 0, 2]));
        let l2 = l.set(3, END);
        assert_eq!(l2.support_len(), 1);
    }

    #[test]
    fn label_weights() {
        let w = WeightTable::new(
            vec![
                BigRational::one(),
                BigRational::new(1.into(), 2.into()),
                BigRational::one(),
            ],
            vec![BigRational::one(), BigRational::one()],
        )
        .unwrap();
        // all-END label has weight 1 (empty product)
        assert!(label_weight1(&Label::empty(), &w).is_one());
        // (spade, spade, end, ...) -> 1/4
        let l = Label::from_entries(&[SPADE, SPADE]);
        assert_eq!(
            label_weight1(&l, &w),
            BigRational::new(1.into(), 4.into())
        );
        // changing entry j from a to b multiplies by w[b]/w[a]
        let l2 = l.set(2, 2);
        assert_eq!(
            label_weight1(&l2, &w),
            label_weight1(&l, &w) * w.w1_of(2) / w.w1_of(SPADE)
        );
    }

    #[test]
    fn config_roundtrip() {
        let text = r#"
            big_n = 2
            m_const = 2
            depth = 3
            sigma1 = 3
            sigma2 = 2
            weights1 = ["1", "1/2", "1"]
        "#;
        let p = ConfigFile::parse(text).unwrap();
        assert_eq!(p.sigma(3), 8);
        assert_eq!(p.weights.w_spade(), &BigRational::new(1.into(), 2.into()));
        assert_eq!(p.trunc.window_hi, 32);
    }

    #[test]
    fn config_rejects_nonpositive_weight() {
        let text = r#"
            big_n = 2
            m_const = 2
            depth = 3
            sigma1 = 3
            sigma2 = 2
            weights1 = ["1", "0", "1"]
        "#;
        let err = ConfigFile::parse(text).unwrap_err();
        assert!(err.to_string().contains("positive"));
    }

    #[test]
    fn scale_bounds() {
        let t = ScaleTable::new(4, vec![2, 3, 4, 2]).unwrap();
        for k in 1..=4 {
            assert!(t.sigma(k) >= 1 << k);
            assert!(t.sigma(k) <= 4i64.pow(k as u32));
            assert!(t.sigma(k) > t.sigma(k - 1));
        }
    }
}
