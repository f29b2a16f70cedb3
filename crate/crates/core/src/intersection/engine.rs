use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::index::{is_stable, TauIndex};
use super::smooth::{reduce, Exps, FracSum};
use super::store::{to_pipoly, MemoStore};
use crate::error::{Error, Result};
use crate::scalar::{a_coeff, binomial, factorial, PiPoly, Rational};

/// Rational parts α_L of a_L = α_L·π^{2L}.
static ALPHA: LazyLock<RwLock<Vec<Rational>>> = LazyLock::new(|| RwLock::new(Vec::new()));

/// α_0..=α_lmax as integers over their least common denominator, by lmax.
static SCALED: LazyLock<RwLock<Vec<Option<Arc<AlphaTable>>>>> =
    LazyLock::new(|| RwLock::new(Vec::new()));

struct AlphaTable {
    den: Exps,
    nums: Vec<BigInt>,
}

fn alpha(l: usize) -> Rational {
    if let Some(a) = ALPHA.read().unwrap().get(l) {
        return a.clone();
    }
    let mut t = ALPHA.write().unwrap();
    while t.len() <= l {
        let i = t.len();
        t.push(a_coeff(i).coeff(i));
    }
    t[l].clone()
}

fn common_denominator(vals: &[Rational]) -> Result<AlphaTable> {
    let exps = vals
        .iter()
        .map(|v| Exps::factor(v.denom()))
        .collect::<Result<Vec<_>>>()?;
    let den = exps.iter().fold(Exps::default(), |acc, e| acc.lcm(e));
    let nums = vals
        .iter()
        .zip(&exps)
        .map(|(v, e)| v.numer() * den.quotient(e))
        .collect();
    Ok(AlphaTable { den, nums })
}

fn scaled_alphas(lmax: usize) -> Arc<AlphaTable> {
    if let Some(Some(t)) = SCALED.read().unwrap().get(lmax) {
        return t.clone();
    }
    let vals: Vec<Rational> = (0..=lmax).map(alpha).collect();
    let table = Arc::new(common_denominator(&vals).expect("α denominators are smooth"));
    let mut cache = SCALED.write().unwrap();
    if cache.len() <= lmax {
        cache.resize(lmax + 1, None);
    }
    cache[lmax].get_or_insert(table).clone()
}

/// The values [τ_k ∏_I]_{g,|I|+1} for k = 0..=cap, as integers over `den`.
#[derive(Debug)]
pub(crate) struct Row {
    den: Exps,
    nums: Vec<BigInt>,
    hankel: RwLock<Option<Arc<Hankel>>>,
}

/// H[c] = Σ_k α_{k+c} R[k] for c in c_lo..=c_hi, over a common denominator.
///
/// Every sum in the recursion contracts one row against a shifted run of
/// α's, so these are cached per row and reused by all parents.
#[derive(Debug)]
struct Hankel {
    c_lo: i64,
    c_hi: i64,
    den: Exps,
    nums: Vec<BigInt>,
}

impl Hankel {
    fn at(&self, c: i64) -> Option<&BigInt> {
        debug_assert!(c <= self.c_hi);
        (c >= self.c_lo).then(|| &self.nums[(c - self.c_lo) as usize])
    }
}

impl Row {
    fn cap(&self) -> i64 {
        self.nums.len() as i64 - 1
    }

    fn hankel(&self, c_need: i64) -> Arc<Hankel> {
        let old_hi = match &*self.hankel.read().unwrap() {
            Some(h) if h.c_hi >= c_need => return h.clone(),
            Some(h) => h.c_hi,
            None => 0,
        };
        let cap = self.cap();
        let c_hi = c_need.max(cap + 2).max(2 * old_hi);
        let c_lo = -cap;
        let table = scaled_alphas((cap + c_hi) as usize);
        let nums = (c_lo..=c_hi)
            .map(|c| {
                let mut t = BigInt::zero();
                for k in (-c).max(0)..=cap {
                    let x = &self.nums[k as usize];
                    if !x.is_zero() {
                        t += &table.nums[(k + c) as usize] * x;
                    }
                }
                t
            })
            .collect();
        let h = Arc::new(Hankel {
            c_lo,
            c_hi,
            den: table.den.add(&self.den),
            nums,
        });
        let mut slot = self.hankel.write().unwrap();
        match &*slot {
            Some(existing) if existing.c_hi >= c_hi => existing.clone(),
            _ => {
                *slot = Some(h.clone());
                h
            }
        }
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// [τ₀³]_{0,3} = 1, [τ₀]_{1,1} = π²/12, [τ₁]_{1,1} = 1/2.
pub fn base_table() -> Vec<(TauIndex, PiPoly)> {
    vec![
        (TauIndex::from_sorted(0, vec![0, 0, 0]), PiPoly::one()),
        (TauIndex::from_sorted(1, vec![0]), PiPoly::monomial(q(1, 12), 1)),
        (TauIndex::from_sorted(1, vec![1]), PiPoly::from_rational(q(1, 2))),
    ]
}

fn base_value(g: u32, d: &[u32]) -> Option<Rational> {
    match (g, d) {
        (0, [0, 0, 0]) => Some(Rational::one()),
        (1, [0]) => Some(q(1, 12)),
        (1, [1]) => Some(q(1, 2)),
        _ => None,
    }
}

/// Exact [τ_{d₁}⋯τ_{dₙ}]_{g,n}; n = 0 gives the closed volume V_g.
pub fn intersection_number(idx: &TauIndex, store: &MemoStore) -> Result<PiPoly> {
    if idx.pi_power().is_none() {
        return Ok(PiPoly::zero());
    }
    let c = coefficient(store, idx.g(), idx.d())?;
    Ok(to_pipoly(idx, &c))
}

fn dim(g: u32, n: usize) -> i64 {
    3 * g as i64 - 3 + n as i64
}

fn weight(d: &[u32]) -> i64 {
    d.iter().map(|&x| x as i64).sum()
}

/// Inserts `k` into a descending list.
fn with_part(d: &[u32], k: u32) -> Vec<u32> {
    let pos = d.partition_point(|&x| x > k);
    let mut v = Vec::with_capacity(d.len() + 1);
    v.extend_from_slice(&d[..pos]);
    v.push(k);
    v.extend_from_slice(&d[pos..]);
    v
}

/// Rational coefficient of the value at (g, d), d descending.
///
/// Unstable and out-of-dimension indices are zero by convention.
pub(crate) fn coefficient(store: &MemoStore, g: u32, d: &[u32]) -> Result<Arc<Rational>> {
    if !is_stable(g, d.len()) || weight(d) > dim(g, d.len()) {
        return Ok(Arc::new(Rational::zero()));
    }
    let idx = TauIndex::from_sorted(g, d.to_vec());
    if let Some(c) = store.lookup(&idx) {
        return Ok(c);
    }
    if d.is_empty() {
        let c = closed_coefficient(store, g)?;
        return store.insert(idx, c);
    }
    let row = row(store, g, &d[1..])?;
    let k = d[0] as usize;
    Ok(Arc::new(reduce(row.nums[k].clone(), row.den.clone())))
}

/// (2g−2)V_g = ½ Σ_{l=1}^{3g−2} (−1)^{l−1} l π^{2l−2}/(2l+1)! · [τ_l]_{g,1}.
fn closed_coefficient(store: &MemoStore, g: u32) -> Result<Rational> {
    let row = row(store, g, &[])?;
    let mut acc = Rational::zero();
    for l in 1..=(3 * g - 2) {
        let c = reduce(row.nums[l as usize].clone(), row.den.clone());
        let term = c * Rational::new(BigInt::from(l), BigInt::from(factorial(2 * l + 1)));
        if l % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc / Rational::from_integer(BigInt::from(4 * (g as i64) - 4)))
}

/// Distinct values of a descending list with multiplicities.
fn runs(d: &[u32]) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    for &x in d {
        match out.last_mut() {
            Some((v, m)) if *v == x => *m += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

/// Row of [τ_k ∏_part]_{g,|part|+1}, k = 0..=cap, memoized in the store.
/// The caller guarantees stability and cap ≥ 0.
///
/// Missing entries come from Mirzakhani's recursion with τ_k as the marked
/// point d₁ and `part` as the remaining entries:
///
/// A = 8 Σ_{j≥2} Σ_L (2d_j+1) a_L [τ_{d₁+d_j+L−1} ∏_{i≠1,j}]_{g,n−1}
/// B = 16 Σ_L Σ_{k₁+k₂=L+d₁−2} a_L [τ_{k₁}τ_{k₂} ∏_{i≠1}]_{g−1,n+1}
/// C = 16 Σ_{g₁+g₂=g, I⊔J} Σ_L Σ_{k₁+k₂=L+d₁−2} a_L [τ_{k₁}∏_I]_{g₁,|I|+1}[τ_{k₂}∏_J]_{g₂,|J|+1}
///
/// Sums over j and over I ⊔ J run over the multiset `part`, weighted by
/// multiplicities, and the C sum visits each unordered pair of factors once.
/// Every child row and Hankel table is shared by all k.
fn row(store: &MemoStore, g: u32, part: &[u32]) -> Result<Arc<Row>> {
    let key = (g, part.to_vec());
    if let Some(r) = store.row(&key) {
        return Ok(r);
    }
    let cap = dim(g, part.len() + 1) - weight(part);
    if cap < 0 {
        return Err(Error::numeric(format!("row ({g}, {part:?}) requested outside its dimension")));
    }
    let mut known: Vec<Option<Rational>> = Vec::with_capacity(cap as usize + 1);
    for k in 0..=cap as u32 {
        let d = with_part(part, k);
        let idx = TauIndex::from_sorted(g, d.clone());
        known.push(match store.peek(&idx) {
            Some(c) => Some((*c).clone()),
            None => base_value(g, &d),
        });
    }
    let missing: Vec<usize> = (0..=cap as usize).filter(|&k| known[k].is_none()).collect();
    if !missing.is_empty() {
        let sums = recursion_iv(store, g, part, cap, &missing)?;
        for (k, sum) in missing.into_iter().zip(sums) {
            known[k] = Some(sum.finish());
        }
    }
    let vals: Vec<Rational> = known.into_iter().map(|v| v.expect("filled")).collect();
    for (k, v) in vals.iter().enumerate() {
        let idx = TauIndex::from_sorted(g, with_part(part, k as u32));
        store.insert(idx, v.clone())?;
    }
    let AlphaTable { den, nums } = common_denominator(&vals)?;
    Ok(store.insert_row(
        key,
        Row {
            den,
            nums,
            hankel: RwLock::new(None),
        },
    ))
}

fn recursion_iv(
    store: &MemoStore,
    g: u32,
    part: &[u32],
    cap: i64,
    ks: &[usize],
) -> Result<Vec<FracSum>> {
    let n = part.len() + 1;
    let mut sums: Vec<FracSum> = ks.iter().map(|_| FracSum::default()).collect();

    if is_stable(g, n - 1) {
        let mut start = 0;
        for (v, mu) in runs(part) {
            let mut others = part.to_vec();
            others.remove(start);
            start += mu;
            // an out-of-dimension child row is identically zero
            if dim(g, n - 1) < weight(&others) {
                continue;
            }
            let child = row(store, g, &others)?;
            let h = child.hankel(1 - v as i64);
            let w = 8 * mu as i64 * (2 * v as i64 + 1);
            for (sum, &k) in sums.iter_mut().zip(ks) {
                if let Some(t) = h.at(1 - k as i64 - v as i64) {
                    sum.push(t * w, &h.den);
                }
            }
        }
    }

    if g >= 1 && is_stable(g - 1, n + 1) {
        for k1 in 0..=(cap - 2) {
            let child = row(store, g - 1, &with_part(part, k1 as u32))?;
            debug_assert_eq!(child.cap(), cap - 2 - k1);
            let h = child.hankel(k1 + 2);
            for (sum, &k) in sums.iter_mut().zip(ks) {
                if let Some(t) = h.at(k1 + 2 - k as i64) {
                    sum.push(t * 16, &h.den);
                }
            }
        }
    }

    split_term(store, g, part, ks, &mut sums)?;
    Ok(sums)
}

fn split_term(store: &MemoStore, g: u32, part: &[u32], ks: &[usize], sums: &mut [FracSum]) -> Result<()> {
    let r = runs(part);
    let mut choice = vec![0usize; r.len()];
    loop {
        let mut part_i = Vec::new();
        let mut part_j = Vec::new();
        let mut mult = BigInt::one();
        for (&(v, m), &i) in r.iter().zip(&choice) {
            part_i.extend(std::iter::repeat_n(v, i));
            part_j.extend(std::iter::repeat_n(v, m - i));
            mult *= BigInt::from(binomial(m as u64, i as u64));
        }
        let mirror: Vec<usize> = r.iter().zip(&choice).map(|(&(_, m), &i)| m - i).collect();
        for g1 in 0..=g {
            let g2 = g - g1;
            // Visit each unordered pair {(g₁,I), (g₂,J)} once.
            let sym = match (g1, &choice).cmp(&(g2, &mirror)) {
                std::cmp::Ordering::Less => 2,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Greater => continue,
            };
            if !is_stable(g1, part_i.len() + 1) || !is_stable(g2, part_j.len() + 1) {
                continue;
            }
            if dim(g1, part_i.len() + 1) < weight(&part_i)
                || dim(g2, part_j.len() + 1) < weight(&part_j)
            {
                continue;
            }
            let r1 = row(store, g1, &part_i)?;
            let r2 = row(store, g2, &part_j)?;
            // Iterate over the shorter row and contract the longer one.
            let (xs, ys) = if r1.cap() <= r2.cap() { (r1, r2) } else { (r2, r1) };
            let h = ys.hankel(xs.cap() + 2);
            let den = xs.den.add(&h.den);
            let w = &mult * (16 * sym);
            for (sum, &k) in sums.iter_mut().zip(ks) {
                let mut t = BigInt::zero();
                for (k1, x) in xs.nums.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    if let Some(y) = h.at(k1 as i64 + 2 - k as i64) {
                        t += x * y;
                    }
                }
                if !t.is_zero() {
                    sum.push(t * &w, &den);
                }
            }
        }
        // advance the mixed-radix counter
        let mut pos = 0;
        loop {
            if pos == r.len() {
                return Ok(());
            }
            if choice[pos] < r[pos].1 {
                choice[pos] += 1;
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn value(g: u32, d: &[u32]) -> PiPoly {
        let store = MemoStore::new();
        intersection_number(&TauIndex::new(g, d.to_vec()).unwrap(), &store).unwrap()
    }

    fn mono(c: &str, j: usize) -> PiPoly {
        PiPoly::monomial(parse_rational(c).unwrap(), j)
    }

    #[test]
    fn base_cases() {
        assert_eq!(value(0, &[0, 0, 0]), PiPoly::one());
        assert_eq!(value(1, &[0]), mono("1/12", 1));
        assert_eq!(value(1, &[1]), mono("1/2", 0));
        assert_eq!(value(1, &[2]), PiPoly::zero());
    }

    #[test]
    fn genus_zero_four_points() {
        assert_eq!(value(0, &[0, 0, 0, 0]), mono("2", 1));
        assert_eq!(value(0, &[1, 0, 0, 0]), mono("12", 0));
    }

    #[test]
    fn known_volumes() {
        assert_eq!(value(0, &[0; 5]), mono("10", 2));
        assert_eq!(value(1, &[0, 0]), mono("1/4", 2));
        assert_eq!(value(2, &[]), mono("43/2160", 3));
        assert_eq!(value(2, &[0]), mono("29/192", 4));
    }
}
