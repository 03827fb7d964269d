//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's word, matrix or E₁ code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;

/// Letters as 1 and 2.
pub type Img = [Vec<u8>; 2];

pub fn random_image<R: Rng>(rng: &mut R, max_len: usize) -> Vec<u8> {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| rng.gen_range(1..=2)).collect()
}

pub fn random_sub<R: Rng>(rng: &mut R, max_len: usize) -> Img {
    [random_image(rng, max_len), random_image(rng, max_len)]
}

pub fn sub_text(s: &Img) -> String {
    let w = |v: &Vec<u8>| v.iter().map(|d| char::from(b'0' + d)).collect::<String>();
    format!("1->{}, 2->{}", w(&s[0]), w(&s[1]))
}

pub fn apply(s: &Img, w: &[u8]) -> Vec<u8> {
    w.iter().flat_map(|&a| s[(a - 1) as usize].iter().copied()).collect()
}

pub fn counts(w: &[u8]) -> [i64; 2] {
    let ones = w.iter().filter(|&&a| a == 1).count() as i64;
    [ones, w.len() as i64 - ones]
}

/// Column j = l(σ(j)).
pub fn incidence(s: &Img) -> [[i64; 2]; 2] {
    let c0 = counts(&s[0]);
    let c1 = counts(&s[1]);
    [[c0[0], c1[0]], [c0[1], c1[1]]]
}

pub fn mat_vec(m: &[[i64; 2]; 2], x: [i64; 2]) -> [i64; 2] {
    [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]]
}

/// Segment `[x, i]` with `i ∈ {1, 2}`.
pub type Seg = ([i64; 2], u8);

/// `E₁(σ)` applied to a set, written out from the definition.
pub fn e1_set(s: &Img, set: &BTreeSet<Seg>) -> BTreeSet<Seg> {
    let m = incidence(s);
    let mut out = BTreeSet::new();
    for &(x, i) in set {
        let base = mat_vec(&m, x);
        let img = &s[(i - 1) as usize];
        for k in 0..img.len() {
            let c = counts(&img[..k]);
            out.insert(([base[0] + c[0], base[1] + c[1]], img[k]));
        }
    }
    out
}

/// `E₁(σ_0 ⋯ σ_{n-1})[0, i]` by applying `E₁(σ_{n-1})` first.
pub fn e1_composite_set(subs: &[Img], i: u8) -> BTreeSet<Seg> {
    let mut set = BTreeSet::from([([0, 0], i)]);
    for s in subs.iter().rev() {
        set = e1_set(s, &set);
    }
    set
}

/// Fibonacci word prefix by repeated string substitution.
pub fn fibonacci_word(len: usize) -> Vec<u8> {
    let fib: Img = [vec![1, 2], vec![1]];
    let mut w = vec![1u8];
    while w.len() < len {
        w = apply(&fib, &w);
    }
    w.truncate(len);
    w
}

/// Largest spread of `|w|₁` over equal-length factors of `w`, lengths `1..=max_len`.
pub fn brute_force_balance(w: &[u8], max_len: usize) -> i64 {
    let mut best = 0;
    for len in 1..=max_len {
        let mut seen = BTreeSet::new();
        for f in w.windows(len) {
            seen.insert(f.to_vec());
        }
        let ones: Vec<i64> = seen.iter().map(|f| counts(f)[0]).collect();
        best = best.max(ones.iter().max().unwrap() - ones.iter().min().unwrap());
    }
    best
}

pub fn fib_numbers(n: usize) -> Vec<i128> {
    let mut f = vec![0i128, 1];
    while f.len() <= n + 1 {
        let k = f.len();
        f.push(f[k - 1] + f[k - 2]);
    }
    f
}

pub fn is_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).any(|s| s >= 0 && s * s == n)
}

pub const PHI: f64 = 1.618_033_988_749_895;
