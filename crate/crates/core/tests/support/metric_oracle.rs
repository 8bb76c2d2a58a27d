//! Brute-force clustering metrics computed sample by sample and pair by pair.

#![allow(dead_code)]

/// Calls `f` on every labeling of `n` samples with labels in `0..c`.
pub fn for_each_labeling(n: usize, c: usize, mut f: impl FnMut(&[usize])) {
    let mut l = vec![0usize; n];
    loop {
        f(&l);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            l[i] += 1;
            if l[i] < c {
                break;
            }
            l[i] = 0;
            i += 1;
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Best matched fraction over every bijection of the label alphabet `0..k`,
/// where `k` bounds both labelings.
pub fn accuracy(pred: &[usize], truth: &[usize]) -> f64 {
    let k = pred.iter().chain(truth).max().map_or(0, |m| m + 1);
    let n = pred.len();
    if n == 0 {
        return 1.0;
    }
    permutations(k)
        .iter()
        .map(|p| pred.iter().zip(truth).filter(|&(&a, &b)| p[a] == b).count())
        .max()
        .unwrap() as f64
        / n as f64
}

/// `(together in both, together in pred only, together in truth only,
/// apart in both)` over unordered pairs.
pub fn pair_counts(pred: &[usize], truth: &[usize]) -> (f64, f64, f64, f64) {
    let (mut a, mut b, mut c, mut d) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..pred.len() {
        for j in (i + 1)..pred.len() {
            match (pred[i] == pred[j], truth[i] == truth[j]) {
                (true, true) => a += 1.0,
                (true, false) => b += 1.0,
                (false, true) => c += 1.0,
                (false, false) => d += 1.0,
            }
        }
    }
    (a, b, c, d)
}

/// Hubert–Arabie form `2(ad − bc) / ((a+b)(b+d) + (a+c)(c+d))`, 1 when the
/// denominator vanishes.
pub fn ari(pred: &[usize], truth: &[usize]) -> f64 {
    let (a, b, c, d) = pair_counts(pred, truth);
    let denom = (a + b) * (b + d) + (a + c) * (c + d);
    if denom == 0.0 {
        1.0
    } else {
        2.0 * (a * d - b * c) / denom
    }
}

/// Pairwise `(precision, recall, f1)`, 0 for empty denominators.
pub fn prf(pred: &[usize], truth: &[usize]) -> (f64, f64, f64) {
    let (tp, fp, fnn, _) = pair_counts(pred, truth);
    let p = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
    let r = if tp + fnn > 0.0 { tp / (tp + fnn) } else { 0.0 };
    let f = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
    (p, r, f)
}

/// Mutual information over geometric mean of entropies, in bits.
/// Both partitions trivial gives 1, exactly one trivial gives 0.
pub fn nmi(pred: &[usize], truth: &[usize]) -> f64 {
    let n = pred.len() as f64;
    if pred.is_empty() {
        return 1.0;
    }
    let k = pred.iter().chain(truth).max().unwrap() + 1;
    let prob = |f: &dyn Fn(usize) -> bool| (0..pred.len()).filter(|&i| f(i)).count() as f64 / n;
    let h = |labels: &[usize]| -> f64 {
        (0..k)
            .map(|x| prob(&|i| labels[i] == x))
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.log2())
            .sum()
    };
    let (hp, ht) = (h(pred), h(truth));
    if hp == 0.0 && ht == 0.0 {
        return 1.0;
    }
    if hp == 0.0 || ht == 0.0 {
        return 0.0;
    }
    let mut mi = 0.0;
    for x in 0..k {
        for y in 0..k {
            let pxy = prob(&|i| pred[i] == x && truth[i] == y);
            if pxy > 0.0 {
                let px = prob(&|i| pred[i] == x);
                let py = prob(&|i| truth[i] == y);
                mi += pxy * (pxy / (px * py)).log2();
            }
        }
    }
    mi / (hp * ht).sqrt()
}
