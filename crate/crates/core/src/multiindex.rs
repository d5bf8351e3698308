//! Compositions, weak compositions, coordinate tuples and multinomial
//! coefficients. All enumerations are lexicographic and all arithmetic is
//! exact (checked `u64`).

use crate::error::{Error, Result};

/// A tuple `(k_1, ..., k_j)` of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(Vec<u32>);

/// A tuple of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeakComposition(Vec<u32>);

/// Coordinate indices `(l_1, ..., l_j)` with `1 <= l_t <= N` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordinateTuple(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&k| k == 0) {
            return Err(Error::InvalidInput("composition parts must be >= 1".into()));
        }
        Ok(Self(parts))
    }
    pub fn parts(&self) -> &[u32] {
        &self.0
    }
    pub fn order(&self) -> usize {
        self.0.len()
    }
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }
    pub fn as_weak(&self) -> WeakComposition {
        WeakComposition(self.0.clone())
    }
}

impl WeakComposition {
    pub fn new(parts: Vec<u32>) -> Self {
        Self(parts)
    }
    pub fn parts(&self) -> &[u32] {
        &self.0
    }
    pub fn order(&self) -> usize {
        self.0.len()
    }
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl CoordinateTuple {
    pub fn new(entries: Vec<usize>, dim: usize) -> Result<Self> {
        if entries.iter().any(|&l| l == 0 || l > dim) {
            return Err(Error::InvalidInput(format!(
                "coordinate indices must lie in 1..={dim}"
            )));
        }
        Ok(Self(entries))
    }
    pub fn entries(&self) -> &[usize] {
        &self.0
    }
    pub fn order(&self) -> usize {
        self.0.len()
    }
}

/// `K_{i,j}`: compositions of `i` into exactly `j` positive parts.
pub fn enumerate_compositions(i: u32, j: usize) -> Vec<Composition> {
    let mut out = Vec::new();
    if j == 0 || (i as usize) < j {
        return out;
    }
    let mut cur = Vec::with_capacity(j);
    fill_parts(i, j, 1, &mut cur, &mut |p| out.push(Composition(p.to_vec())));
    out
}

/// `K^0_{i,j}`: weak compositions of `i` into `j` nonnegative parts.
pub fn enumerate_weak_compositions(i: u32, j: usize) -> Vec<WeakComposition> {
    let mut out = Vec::new();
    if j == 0 {
        return out;
    }
    let mut cur = Vec::with_capacity(j);
    fill_parts(i, j, 0, &mut cur, &mut |p| {
        out.push(WeakComposition(p.to_vec()))
    });
    out
}

fn fill_parts(rest: u32, slots: usize, min: u32, cur: &mut Vec<u32>, emit: &mut dyn FnMut(&[u32])) {
    if slots == 1 {
        if rest >= min {
            cur.push(rest);
            emit(cur);
            cur.pop();
        }
        return;
    }
    let reserve = min * (slots as u32 - 1);
    if rest < reserve + min {
        return;
    }
    for k in min..=rest - reserve {
        cur.push(k);
        fill_parts(rest - k, slots - 1, min, cur, emit);
        cur.pop();
    }
}

/// `L_j`: all `N^j` coordinate tuples in lexicographic order.
pub fn enumerate_coordinate_tuples(j: usize, dim: usize) -> Vec<CoordinateTuple> {
    if dim == 0 {
        return Vec::new();
    }
    let total = dim.pow(j as u32);
    (0..total)
        .map(|mut code| {
            let mut entries = vec![0usize; j];
            for slot in (0..j).rev() {
                entries[slot] = code % dim + 1;
                code /= dim;
            }
            CoordinateTuple(entries)
        })
        .collect()
}

/// Exact binomial coefficient with overflow detection.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow(format!("binomial({n}, {k})")));
        }
    }
    Ok(acc as u64)
}

/// `C^n_k = n! / (k_1! ... k_j!)`, treating any remainder `n - |k|` as an
/// extra part so that the value is always an integer.
pub fn multinomial(n: u32, k: &WeakComposition) -> Result<u64> {
    if k.parts().iter().any(|&p| p > n) || k.weight() > n {
        return Err(Error::InvalidInput(format!(
            "multinomial parts {:?} exceed n = {n}",
            k.parts()
        )));
    }
    let mut acc: u64 = 1;
    let mut left = n as u64;
    for &p in k.parts() {
        let b = binomial(left, p as u64)?;
        acc = acc
            .checked_mul(b)
            .ok_or_else(|| Error::Overflow(format!("multinomial({n}; {:?})", k.parts())))?;
        left -= p as u64;
    }
    Ok(acc)
}
