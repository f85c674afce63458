//! Truncated integer power series, enough for the rational Hilbert series used here.

/// `(a * b) mod t^len`.
pub fn mul(a: &[i64], b: &[i64], len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `a / (1 - t^k) mod t^len`.
pub fn div_one_minus(a: &[i64], k: usize, len: usize) -> Vec<i64> {
    assert!(k > 0);
    let mut out: Vec<i64> = (0..len).map(|i| a.get(i).copied().unwrap_or(0)).collect();
    for i in k..len {
        out[i] += out[i - k];
    }
    out
}

/// `1 - t^k` as a coefficient vector.
pub fn one_minus(k: usize) -> Vec<i64> {
    let mut v = vec![0i64; k + 1];
    v[0] = 1;
    v[k] -= 1;
    v
}

/// Expands `prod(1 - t^a) / prod(1 - t^b)` up to `t^(len-1)`.
pub fn rational(numer: &[usize], denom: &[usize], len: usize) -> Vec<i64> {
    let mut s = vec![0i64; len.max(1)];
    s[0] = 1;
    for &a in numer {
        s = mul(&s, &one_minus(a), len);
    }
    for &b in denom {
        s = div_one_minus(&s, b, len);
    }
    s.truncate(len);
    s
}
