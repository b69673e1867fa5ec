//! Weyl dimensions of `su(n)` and `sp(n)` irreps in exact arithmetic, and
//! the bounded enumerations behind the uniqueness lemmas.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Series {
    Su,
    Sp,
}

impl Series {
    /// Length of the weight vector for rank parameter `n`.
    pub fn weight_len(self, n: usize) -> usize {
        match self {
            Series::Su => n.saturating_sub(1),
            Series::Sp => n,
        }
    }

    fn min_n(self) -> usize {
        match self {
            Series::Su => 2,
            Series::Sp => 1,
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Series::Su => "su",
            Series::Sp => "sp",
        })
    }
}

impl FromStr for Series {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "su" => Ok(Series::Su),
            "sp" => Ok(Series::Sp),
            other => Err(Error::InvalidGroup {
                family: other.to_string(),
                d: 0,
            }),
        }
    }
}

/// Dominant weight in the basis of fundamental weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector {
    pub series: Series,
    pub n: usize,
    pub a: Vec<u32>,
}

impl WeightVector {
    pub fn new(series: Series, n: usize, a: Vec<u32>) -> Result<Self> {
        if n < series.min_n() {
            return Err(Error::InvalidGroup {
                family: series.to_string(),
                d: n,
            });
        }
        if a.len() != series.weight_len(n) {
            return Err(Error::DimensionMismatch(format!(
                "{series}({n}) weights have {} entries, got {}",
                series.weight_len(n),
                a.len()
            )));
        }
        Ok(WeightVector { series, n, a })
    }

    pub fn trivial(series: Series, n: usize) -> Result<Self> {
        Self::new(series, n, vec![0; series.weight_len(n)])
    }

    /// The `j`-th fundamental weight, 1-based.
    pub fn fundamental(series: Series, n: usize, j: usize) -> Result<Self> {
        let mut w = Self::trivial(series, n)?;
        if j == 0 || j > w.a.len() {
            return Err(Error::InvalidAxis {
                axis: j,
                d: w.a.len(),
            });
        }
        w.a[j - 1] = 1;
        Ok(w)
    }

    pub fn is_trivial(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    /// The dual weight (reversal for `su`; `sp` irreps are self-dual).
    pub fn dual(&self) -> Self {
        let mut w = self.clone();
        if self.series == Series::Su {
            w.a.reverse();
        }
        w
    }

    pub fn dim(&self) -> Result<BigInt> {
        match self.series {
            Series::Su => dim_su(self),
            Series::Sp => dim_sp(self),
        }
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.a.serialize(s)
    }
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn integral(q: BigRational, w: &WeightVector) -> Result<BigInt> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(Error::NonIntegral(format!("{}{} gives {q}", w.series, w)))
    }
}

/// `a_i + … + a_{j−1}` with 1-based indices.
fn partial(a: &[u32], i: usize, j: usize) -> u64 {
    a[i - 1..j - 1].iter().map(|&x| x as u64).sum()
}

pub fn dim_su(w: &WeightVector) -> Result<BigInt> {
    if w.series != Series::Su {
        return Err(Error::Precondition(format!(
            "dim_su called on an {} weight",
            w.series
        )));
    }
    let n = w.n;
    let mut q = BigRational::one();
    for j in 1..=n {
        for i in 1..j {
            q *= ratio((j - i) as u64 + partial(&w.a, i, j), (j - i) as u64);
        }
    }
    integral(q, w)
}

pub fn dim_sp(w: &WeightVector) -> Result<BigInt> {
    if w.series != Series::Sp {
        return Err(Error::Precondition(format!(
            "dim_sp called on an {} weight",
            w.series
        )));
    }
    let n = w.n;
    let a = &w.a;
    let mut q = BigRational::one();
    for j in 1..=n {
        for i in 1..j {
            q *= ratio((j - i) as u64 + partial(a, i, j), (j - i) as u64);
        }
        let tail: u64 = a[j - 1..].iter().map(|&x| x as u64).sum();
        for i in 1..=j {
            let den = (2 * n + 2 - i - j) as u64;
            q *= ratio(den + partial(a, i, j) + 2 * tail, den);
        }
    }
    integral(q, w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrrepEntry {
    pub weight: WeightVector,
    pub dim: u64,
}

fn small(dim: &BigInt) -> Option<u64> {
    dim.to_u64()
}

/// Every weight with dimension at most `max_dim`, sorted by dimension and
/// then lexicographically.
///
/// Depth-first over coordinates: with the trailing coordinates at zero the
/// dimension is a lower bound for every extension, so a branch stops as soon
/// as it exceeds the cap.
pub fn enumerate_irreps(series: Series, n: usize, max_dim: u64) -> Result<Vec<IrrepEntry>> {
    if max_dim == 0 {
        return Err(Error::Precondition("max_dim must be at least 1".into()));
    }
    let root = WeightVector::trivial(series, n)?;
    let mut out = Vec::new();
    dfs(root, 0, max_dim, &mut out)?;
    out.sort_by(|x, y| x.dim.cmp(&y.dim).then_with(|| x.weight.a.cmp(&y.weight.a)));
    Ok(out)
}

fn dfs(mut w: WeightVector, pos: usize, max_dim: u64, out: &mut Vec<IrrepEntry>) -> Result<()> {
    if pos == w.a.len() {
        let dim = small(&w.dim()?).expect("bounded by max_dim");
        out.push(IrrepEntry { weight: w, dim });
        return Ok(());
    }
    loop {
        match small(&w.dim()?) {
            Some(d) if d <= max_dim => {}
            _ => return Ok(()),
        }
        dfs(w.clone(), pos + 1, max_dim, out)?;
        w.a[pos] += 1;
    }
}

/// Multisets of nontrivial dimensions from `dims` summing to `target`,
/// each in nonincreasing order.
pub fn decompositions(dims: &[u64], target: u64) -> Vec<Vec<u64>> {
    let mut uniq: Vec<u64> = dims.iter().copied().filter(|&d| d > 1).collect();
    uniq.sort_unstable_by(|a, b| b.cmp(a));
    uniq.dedup();
    let mut out = Vec::new();
    fn go(uniq: &[u64], rest: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for (k, &d) in uniq.iter().enumerate() {
            if d <= rest {
                cur.push(d);
                go(&uniq[k..], rest - d, cur, out);
                cur.pop();
            }
        }
    }
    go(&uniq, target, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub series: Series,
    pub n: usize,
    pub lemma: &'static str,
    /// Human summary of what the enumeration established.
    pub statement: String,
    pub max_dim: u64,
    pub found: Vec<IrrepEntry>,
    pub expected: Vec<WeightVector>,
    /// Ways to write `4n` (sp) or `2n` (su) as a sum of nontrivial irrep
    /// dimensions.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub decompositions: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub arithmetic: Vec<ArithmeticCheck>,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArithmeticCheck {
    pub expression: String,
    pub holds: bool,
}

fn weights(series: Series, n: usize, list: &[&[u32]]) -> Result<Vec<WeightVector>> {
    list.iter()
        .map(|a| WeightVector::new(series, n, a.to_vec()))
        .collect()
}

fn exact_dim(
    series: Series,
    n: usize,
    dim: u64,
    lemma: &'static str,
    expected: Vec<WeightVector>,
) -> Result<LemmaReport> {
    let found: Vec<IrrepEntry> = enumerate_irreps(series, n, dim)?
        .into_iter()
        .filter(|e| e.dim == dim)
        .collect();
    let mut got: Vec<WeightVector> = found.iter().map(|e| e.weight.clone()).collect();
    got.sort();
    let mut want = expected.clone();
    want.sort();
    let statement = if found.is_empty() {
        format!("no {dim}-dimensional irrep of {series}({n})")
    } else {
        let names: Vec<String> = found.iter().map(|e| e.weight.to_string()).collect();
        format!("{dim}-dimensional irreps of {series}({n}): {}", names.join(", "))
    };
    Ok(LemmaReport {
        series,
        n,
        lemma,
        statement,
        max_dim: dim,
        found,
        expected,
        decompositions: Vec::new(),
        arithmetic: Vec::new(),
        holds: got == want,
    })
}

fn su_lemma_one(n: usize) -> Result<LemmaReport> {
    let s = Series::Su;
    let expected = match n {
        3 => weights(s, n, &[&[0, 2], &[2, 0]])?,
        5 => weights(s, n, &[&[0, 1, 0, 0], &[0, 0, 1, 0]])?,
        _ => Vec::new(),
    };
    exact_dim(s, n, 2 * n as u64, "su_2n", expected)
}

fn su_lemma_two(n: usize) -> Result<LemmaReport> {
    let s = Series::Su;
    let expected = vec![
        WeightVector::fundamental(s, n, 1)?,
        WeightVector::fundamental(s, n, n - 1)?,
    ];
    exact_dim(s, n, n as u64, "su_n", expected)
}

fn sp_lemma(n: usize) -> Result<LemmaReport> {
    let s = Series::Sp;
    let cap = 4 * n as u64;
    let all = enumerate_irreps(s, n, cap)?;
    let nontrivial: Vec<IrrepEntry> = all.iter().filter(|e| !e.weight.is_trivial()).cloned().collect();
    let dims: Vec<u64> = nontrivial.iter().map(|e| e.dim).collect();
    let decompositions = decompositions(&dims, cap);
    let mut arithmetic = Vec::new();
    let (expected, holds, statement) = if n == 2 {
        // the four smallest dimensions are distinct, so each irrep is the
        // only one of its dimension and hence self-dual
        let smallest: Vec<u64> = enumerate_irreps(s, n, 10)?.iter().map(|e| e.dim).collect();
        let pairs = [(1u64, "1+1 < 8"), (5, "5+5 > 8")];
        for (d, expr) in pairs {
            let ok = if d == 1 { 2 * d < cap } else { 2 * d > cap };
            arithmetic.push(ArithmeticCheck {
                expression: expr.to_string(),
                holds: ok,
            });
        }
        let expected = weights(s, n, &[&[1, 0], &[0, 1]])?;
        let holds =
            smallest == [1, 4, 5, 10] && decompositions == [vec![4, 4]] && arithmetic.iter().all(|c| c.holds);
        (
            expected,
            holds,
            format!("smallest dims of sp(2): {smallest:?}; 8 = 4 + 4 only"),
        )
    } else {
        let expected = vec![WeightVector::fundamental(s, n, 1)?];
        let got: Vec<WeightVector> = nontrivial.iter().map(|e| e.weight.clone()).collect();
        let holds = got == expected;
        (
            expected,
            holds,
            format!("only the fundamental of sp({n}) has dimension at most {cap}"),
        )
    };
    Ok(LemmaReport {
        series: s,
        n,
        lemma: "sp_4n",
        statement,
        max_dim: cap,
        found: nontrivial,
        expected,
        decompositions,
        arithmetic,
        holds,
    })
}

/// Reproduces the uniqueness lemmas; a mismatch is an error.
pub fn verify_lemma(series: Series, n: usize) -> Result<Vec<LemmaReport>> {
    let reports = match series {
        Series::Su if (3..=12).contains(&n) => vec![su_lemma_one(n)?, su_lemma_two(n)?],
        Series::Sp if (2..=8).contains(&n) => vec![sp_lemma(n)?],
        _ => {
            return Err(Error::Precondition(format!(
                "lemma range is su 3..=12, sp 2..=8; got {series}({n})"
            )))
        }
    };
    if let Some(r) = reports.iter().find(|r| !r.holds) {
        return Err(Error::LemmaContradiction(format!(
            "{} for {series}({n}): {}",
            r.lemma, r.statement
        )));
    }
    Ok(reports)
}
