//! Exhaustive count of transitive factorizations in the symmetric group,
//! used as an independent check of the degree pipeline.
//!
//! Permutations compose right to left: `(a b) * p` applies `p` first.

use std::collections::HashMap;
use std::fmt;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactring::Scalar;
use crate::partitions::big_factorial;
use crate::unfolding::{FamilySpec, MultisingularityType};

/// Largest sheet count the search accepts by default.
pub const DEFAULT_SHEET_LIMIT: usize = 7;

const MAX_N: usize = 12;

/// A permutation of `{0, .., n-1}`, stored by images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n).collect() }
    }

    /// From images in `1..=n`, as in `[2, 1, 4, 3]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &i in images {
            if i == 0 || i > n || seen[i - 1] {
                return Err(Error::InvalidArgument(format!("{images:?} is not a permutation")));
            }
            seen[i - 1] = true;
            out.push(i - 1);
        }
        Ok(Perm { images: out })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self * other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Perm { images: inv }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i);
                i = self.images[i];
            }
            out.push(cyc);
        }
        out
    }
}

/// Cycle lengths in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("cycle lengths must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn num_parts(&self) -> usize {
        self.0.len()
    }

    /// Number of permutations with this cycle type.
    pub fn class_size(&self) -> BigInt {
        let mut den = BigInt::from(1);
        for &p in &self.0 {
            den *= p;
        }
        let parts: Vec<u32> = self.0.iter().map(|&p| p as u32).collect();
        den *= crate::partitions::aut_order(&parts);
        big_factorial(self.n() as u64) / den
    }

    /// A fixed representative: consecutive points in each cycle.
    pub fn representative(&self) -> Perm {
        let mut images: Vec<usize> = (0..self.n()).collect();
        let mut start = 0;
        for &len in &self.0 {
            for i in 0..len {
                images[start + i] = start + (i + 1) % len;
            }
            start += len;
        }
        Perm { images }
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn cycle_type(p: &Perm) -> CycleType {
    CycleType::new(p.cycles().iter().map(Vec::len).collect()).expect("cycles are nonempty")
}

/// Profiles over infinity (`alpha`) and over the degenerate value (`beta`)
/// plus `s` simple branch points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorizationQuery {
    pub n: usize,
    pub alpha: CycleType,
    pub beta: CycleType,
    pub s: usize,
}

impl FactorizationQuery {
    /// Checks sizes and the genus-0 Riemann-Hurwitz balance.
    pub fn new(n: usize, alpha: CycleType, beta: CycleType, s: usize) -> Result<Self> {
        if alpha.n() != n || beta.n() != n {
            return Err(Error::InvalidArgument(format!("profiles {alpha} and {beta} must both sum to {n}")));
        }
        let lhs = (n - alpha.num_parts()) + (n - beta.num_parts()) + s;
        if n == 0 || lhs != 2 * n - 2 {
            return Err(Error::Unbalanced(format!(
                "n={n} alpha={alpha} beta={beta} s={s}: {lhs} != {}",
                (2 * n).saturating_sub(2)
            )));
        }
        Ok(FactorizationQuery { n, alpha, beta, s })
    }
}

impl fmt::Display for FactorizationQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} alpha={} beta={} s={}", self.n, self.alpha, self.beta, self.s)
    }
}

/// The raw tuple count and its normalization by `n!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationCount {
    pub tuples: BigInt,
    pub normalized: Scalar,
}

#[derive(Clone, Copy)]
struct Uf {
    parent: [u8; MAX_N],
    comps: u8,
}

impl Uf {
    fn new(n: usize) -> Self {
        let mut parent = [0u8; MAX_N];
        for (i, p) in parent.iter_mut().enumerate().take(n) {
            *p = i as u8;
        }
        Uf { parent, comps: n as u8 }
    }

    fn find(&mut self, mut x: u8) -> u8 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u8, b: u8) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra as usize] = rb;
            self.comps -= 1;
        }
    }

    fn absorb(&mut self, p: &[u8]) {
        for (i, &j) in p.iter().enumerate() {
            self.union(i as u8, j);
        }
    }
}

struct Search {
    n: usize,
    transitive: bool,
    transpositions: Vec<(u8, u8)>,
}

fn cycle_count(p: &[u8]) -> usize {
    let mut seen = [false; MAX_N];
    let mut count = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
        }
    }
    count
}

impl Search {
    /// Tuples `(t_1, .., t_left)` of transpositions with
    /// `t_left ... t_1 * current = id`.
    fn count(&self, current: &[u8], uf: Uf, left: usize) -> u64 {
        let n = self.n;
        let dist = n - cycle_count(current);
        if dist > left || !(left - dist).is_multiple_of(2) {
            return 0;
        }
        if self.transitive && uf.comps as usize - 1 > left {
            return 0;
        }
        if left == 0 {
            return u64::from(!self.transitive || uf.comps == 1);
        }
        if left == 1 {
            // the last factor is forced: current must itself be a transposition
            let mut moved = (0..n).filter(|&i| current[i] as usize != i);
            let a = moved.next().expect("distance 1 moves two points") as u8;
            let b = current[a as usize];
            let mut uf = uf;
            uf.union(a, b);
            return u64::from(!self.transitive || uf.comps == 1);
        }
        let mut total = 0;
        let mut next = [0u8; MAX_N];
        for &(a, b) in &self.transpositions {
            next[..n].copy_from_slice(&current[..n]);
            for v in next[..n].iter_mut() {
                if *v == a {
                    *v = b;
                } else if *v == b {
                    *v = a;
                }
            }
            let mut uf2 = uf;
            uf2.union(a, b);
            total += self.count(&next[..n], uf2, left - 1);
        }
        total
    }
}

fn all_of_type(t: &CycleType) -> Vec<Vec<u8>> {
    let n = t.n();
    let mut out = Vec::new();
    let mut p: Vec<u8> = (0..n as u8).collect();
    loop {
        let perm = Perm {
            images: p.iter().map(|&x| x as usize).collect(),
        };
        if &cycle_type(&perm) == t {
            out.push(p.clone());
        }
        // next permutation in lexicographic order
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

/// Counts transitive factorizations; `n` must not exceed [`DEFAULT_SHEET_LIMIT`].
pub fn count_factorizations(q: &FactorizationQuery) -> Result<FactorizationCount> {
    count_factorizations_with(q, DEFAULT_SHEET_LIMIT, true)
}

/// As [`count_factorizations`] with an explicit sheet limit; with
/// `transitive = false` the transitivity condition is dropped.
pub fn count_factorizations_with(q: &FactorizationQuery, limit: usize, transitive: bool) -> Result<FactorizationCount> {
    let checked = FactorizationQuery::new(q.n, q.alpha.clone(), q.beta.clone(), q.s)?;
    let n = checked.n;
    if n > limit.min(MAX_N) {
        return Err(Error::TooManySheets { n, limit: limit.min(MAX_N) });
    }
    let alpha: Vec<u8> = checked.alpha.representative().images.iter().map(|&x| x as u8).collect();
    let mut transpositions = Vec::new();
    for a in 0..n as u8 {
        for b in a + 1..n as u8 {
            transpositions.push((a, b));
        }
    }
    let search = Search {
        n,
        transitive,
        transpositions,
    };
    let betas = all_of_type(&checked.beta);
    let per_alpha: u64 = betas
        .par_iter()
        .map(|beta| {
            let mut uf = Uf::new(n);
            uf.absorb(&alpha);
            uf.absorb(beta);
            let prod: Vec<u8> = alpha.iter().map(|&i| beta[i as usize]).collect();
            search.count(&prod, uf, checked.s)
        })
        .sum();
    let tuples = BigInt::from(per_alpha) * checked.alpha.class_size();
    let normalized = Scalar::new(tuples.clone(), big_factorial(n as u64));
    Ok(FactorizationCount { tuples, normalized })
}

/// `{m_i + 1}` padded with fixed points up to `n`.
fn beta_profile(mu: &MultisingularityType, n: usize) -> Result<CycleType> {
    let mut parts: Vec<usize> = mu.parts().iter().map(|&m| m as usize + 1).collect();
    let used: usize = parts.iter().sum();
    if used > n {
        return Err(Error::ImpossibleProfile(format!("{mu} needs {used} > {n} sheets")));
    }
    parts.extend(std::iter::repeat_n(1, n - used));
    CycleType::new(parts)
}

/// The factorization problem whose normalized count is the Hurwitz number
/// of the stratum.
pub fn query_for_stratum(f: FamilySpec, mu: &MultisingularityType) -> Result<FactorizationQuery> {
    let size = mu.size() as usize;
    let (n, alpha, s) = match f {
        FamilySpec::Laurent { k, l } => {
            let n = (k + l) as usize;
            (n, CycleType::new(vec![k as usize, l as usize])?, n.checked_sub(size))
        }
        FamilySpec::Polynomial { n } => {
            let sheets = n as usize + 1;
            (sheets, CycleType::new(vec![sheets])?, (n as usize).checked_sub(size))
        }
    };
    let s = s.ok_or_else(|| Error::ImpossibleProfile(format!("{mu} exceeds the parameters of {f}")))?;
    let beta = beta_profile(mu, n)?;
    FactorizationQuery::new(n, alpha, beta, s)
}

pub fn oracle_for_stratum(f: FamilySpec, mu: &MultisingularityType) -> Result<(FactorizationQuery, Scalar)> {
    let q = query_for_stratum(f, mu)?;
    let c = count_factorizations(&q)?;
    Ok((q, c.normalized))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct CacheRecord {
    n: usize,
    alpha: CycleType,
    beta: CycleType,
    s: usize,
    tuples: String,
    normalized: String,
}

/// Line-delimited JSON store of finished counts.
pub struct OracleCache {
    path: PathBuf,
    entries: HashMap<FactorizationQuery, FactorizationCount>,
}

impl OracleCache {
    /// Loads `path` if it exists; malformed lines are an error.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            let file = std::fs::File::open(&path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
            for (i, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|e| Error::Cache(e.to_string()))?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: CacheRecord = serde_json::from_str(&line)
                    .map_err(|e| Error::Cache(format!("{}:{}: {e}", path.display(), i + 1)))?;
                let q = FactorizationQuery::new(rec.n, rec.alpha, rec.beta, rec.s)?;
                let tuples: BigInt = rec
                    .tuples
                    .parse()
                    .map_err(|e| Error::Cache(format!("{}:{}: {e}", path.display(), i + 1)))?;
                let normalized: Scalar = rec
                    .normalized
                    .parse()
                    .map_err(|e| Error::Cache(format!("{}:{}: {e:?}", path.display(), i + 1)))?;
                entries.insert(q, FactorizationCount { tuples, normalized });
            }
        }
        Ok(OracleCache { path, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, q: &FactorizationQuery) -> Option<&FactorizationCount> {
        self.entries.get(q)
    }

    /// Looks `q` up, counting and appending on a miss.
    pub fn count(&mut self, q: &FactorizationQuery) -> Result<FactorizationCount> {
        if let Some(c) = self.entries.get(q) {
            return Ok(c.clone());
        }
        let c = count_factorizations(q)?;
        self.insert(q, &c)?;
        Ok(c)
    }

    /// Records a count computed elsewhere.
    pub fn insert(&mut self, q: &FactorizationQuery, c: &FactorizationCount) -> Result<()> {
        if self.entries.contains_key(q) {
            return Ok(());
        }
        self.append(q, c)?;
        self.entries.insert(q.clone(), c.clone());
        Ok(())
    }

    fn append(&self, q: &FactorizationQuery, c: &FactorizationCount) -> Result<()> {
        let rec = CacheRecord {
            n: q.n,
            alpha: q.alpha.clone(),
            beta: q.beta.clone(),
            s: q.s,
            tuples: c.tuples.to_string(),
            normalized: c.normalized.to_string(),
        };
        let mut line = serde_json::to_string(&rec).map_err(|e| Error::Cache(e.to_string()))?;
        line.push('\n');
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| Error::Cache(format!("{}: {e}", self.path.display())))?;
        file.write_all(line.as_bytes())
            .map_err(|e| Error::Cache(format!("{}: {e}", self.path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::{frac, int};

    fn ct(p: &[usize]) -> CycleType {
        CycleType::new(p.to_vec()).unwrap()
    }

    fn count(n: usize, a: &[usize], b: &[usize], s: usize) -> Scalar {
        let q = FactorizationQuery::new(n, ct(a), ct(b), s).unwrap();
        count_factorizations(&q).unwrap().normalized
    }

    #[test]
    fn cycle_types() {
        assert_eq!(cycle_type(&Perm::identity(4)), ct(&[1, 1, 1, 1]));
        assert_eq!(cycle_type(&Perm::from_one_based(&[2, 1, 4, 3]).unwrap()), ct(&[2, 2]));
        assert_eq!(cycle_type(&Perm::from_one_based(&[2, 3, 1, 4]).unwrap()), ct(&[3, 1]));
        assert!(Perm::from_one_based(&[1, 1]).is_err());
        assert_eq!(ct(&[2, 1, 1]).class_size(), BigInt::from(6));
        assert_eq!(ct(&[3, 3]).class_size(), BigInt::from(40));
    }

    #[test]
    fn small_counts() {
        assert_eq!(count(3, &[2, 1], &[1, 1, 1], 3), int(4));
        assert_eq!(count(3, &[2, 1], &[3], 1), int(1));
        assert_eq!(count(2, &[1, 1], &[1, 1], 2), frac(1, 2));
        assert_eq!(count(4, &[2, 2], &[2, 2], 2), int(1));
    }

    #[test]
    fn balance_enforced() {
        assert!(matches!(
            FactorizationQuery::new(3, ct(&[2, 1]), ct(&[1, 1, 1]), 2),
            Err(Error::Unbalanced(_))
        ));
        let q = FactorizationQuery::new(8, ct(&[4, 4]), ct(&[1; 8]), 8).unwrap();
        assert!(matches!(count_factorizations(&q), Err(Error::TooManySheets { .. })));
    }

    #[test]
    fn stratum_queries() {
        let mu = |s: &str| MultisingularityType::parse(s).unwrap();
        let (q, c) = oracle_for_stratum(FamilySpec::Laurent { k: 2, l: 1 }, &mu("2")).unwrap();
        assert_eq!(q, FactorizationQuery::new(3, ct(&[2, 1]), ct(&[3]), 1).unwrap());
        assert_eq!(c, int(1));
        let (q, c) = oracle_for_stratum(FamilySpec::Polynomial { n: 3 }, &mu("2")).unwrap();
        assert_eq!(q, FactorizationQuery::new(4, ct(&[4]), ct(&[3, 1]), 1).unwrap());
        assert_eq!(c, int(1));
        let (_, c) = oracle_for_stratum(FamilySpec::Laurent { k: 2, l: 2 }, &mu("")).unwrap();
        assert_eq!(c, int(12));
        assert!(matches!(
            query_for_stratum(FamilySpec::Laurent { k: 1, l: 1 }, &mu("1,1")),
            Err(Error::ImpossibleProfile(_))
        ));
    }

    /// Brute force over every alpha in the class, no pruning.
    fn brute(n: usize, a: &[usize], b: &[usize], s: usize) -> BigInt {
        let alphas = all_of_type(&ct(a));
        let betas = all_of_type(&ct(b));
        let mut ts = Vec::new();
        for x in 0..n as u8 {
            for y in x + 1..n as u8 {
                ts.push((x, y));
            }
        }
        let mut total = 0u64;
        for al in &alphas {
            for be in &betas {
                let mut idx = vec![0usize; s];
                loop {
                    let mut p: Vec<u8> = al.iter().map(|&i| be[i as usize]).collect();
                    let mut uf = Uf::new(n);
                    uf.absorb(al);
                    uf.absorb(be);
                    for &k in &idx {
                        let (x, y) = ts[k];
                        for v in p.iter_mut() {
                            if *v == x {
                                *v = y;
                            } else if *v == y {
                                *v = x;
                            }
                        }
                        uf.union(x, y);
                    }
                    if p.iter().enumerate().all(|(i, &v)| i == v as usize) && uf.comps == 1 {
                        total += 1;
                    }
                    let Some(pos) = (0..s).find(|&i| idx[i] + 1 < ts.len()) else { break };
                    idx[pos] += 1;
                    for v in idx.iter_mut().take(pos) {
                        *v = 0;
                    }
                }
            }
        }
        BigInt::from(total)
    }

    #[test]
    fn reduction_matches_full_enumeration() {
        let cases: [(usize, &[usize], &[usize], usize); 5] = [
            (3, &[2, 1], &[1, 1, 1], 3),
            (3, &[3], &[2, 1], 1),
            (4, &[2, 2], &[2, 1, 1], 3),
            (4, &[3, 1], &[2, 2], 2),
            (4, &[4], &[1, 1, 1, 1], 3),
        ];
        for (n, a, b, s) in cases {
            let q = FactorizationQuery::new(n, ct(a), ct(b), s).unwrap();
            assert_eq!(count_factorizations(&q).unwrap().tuples, brute(n, a, b, s), "{q}");
        }
    }

    #[test]
    fn transitivity_only_removes() {
        let q = FactorizationQuery::new(4, ct(&[2, 2]), ct(&[1, 1, 1, 1]), 4).unwrap();
        let t = count_factorizations_with(&q, 7, true).unwrap().tuples;
        let all = count_factorizations_with(&q, 7, false).unwrap().tuples;
        assert!(all > t);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("oracle.jsonl");
        let q = FactorizationQuery::new(3, ct(&[2, 1]), ct(&[3]), 1).unwrap();
        let mut cache = OracleCache::open(&path).unwrap();
        assert!(cache.is_empty());
        assert_eq!(cache.count(&q).unwrap().normalized, int(1));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text.trim(),
            r#"{"n":3,"alpha":[2,1],"beta":[3],"s":1,"tuples":"6","normalized":"1"}"#
        );
        let cache = OracleCache::open(&path).unwrap();
        assert_eq!(cache.get(&q).unwrap().tuples, BigInt::from(6));
    }
}
