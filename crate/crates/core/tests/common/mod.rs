#![allow(dead_code)]

use conigen::randkit::RngStream;
use conigen::soco::ConeLabel;

/// Small helper over the public stream API for drawing test parameters.
pub struct Draw(RngStream);

impl Draw {
    pub fn new(seed: u64) -> Self {
        Self(RngStream::new(seed, 9_999))
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int(&mut self, lo: usize, hi: usize) -> usize {
        let u = self.0.next_uniform(0.0, 1.0).unwrap();
        (lo + (u * (hi - lo + 1) as f64) as usize).min(hi)
    }

    pub fn shuffle<T>(&mut self, v: &mut [T]) {
        for i in (1..v.len()).rev() {
            let j = self.int(0, i);
            v.swap(i, j);
        }
    }
}

/// Cone dims, labels and m admissible for the maximally complementary construction.
/// The last cone is labeled N so the same draw also serves the extended variant.
pub fn maxcomp_case(seed: u64) -> (usize, Vec<usize>, Vec<ConeLabel>) {
    use ConeLabel::*;
    let mut d = Draw::new(seed);
    loop {
        let t2 = d.int(0, 2);
        let b = d.int(1, 3);
        let r = d.int(0, 2);
        if b + r < 2 {
            continue;
        }
        let mut labels = Vec::new();
        labels.extend(std::iter::repeat_n(T2, t2));
        labels.extend(std::iter::repeat_n(B, b));
        labels.extend(std::iter::repeat_n(R, r));
        labels.extend(std::iter::repeat_n(T1, d.int(0, 1)));
        labels.extend(std::iter::repeat_n(T3, d.int(0, 1)));
        labels.extend(std::iter::repeat_n(N, d.int(0, 1)));
        d.shuffle(&mut labels);
        labels.push(N);
        let dims: Vec<usize> = labels
            .iter()
            .map(|l| if l.needs_tail() { d.int(2, 4) } else { d.int(1, 4) })
            .collect();
        let n: usize = dims.iter().sum();
        let m = d.int(t2 + 2, b + r + t2);
        if m < n {
            return (m, dims, labels);
        }
    }
}

/// Arbitrary labels for the general optimal construction, last cone N.
pub fn general_case(seed: u64) -> (usize, Vec<usize>, Vec<ConeLabel>) {
    use ConeLabel::*;
    let all = [B, N, R, T1, T2, T3];
    let mut d = Draw::new(seed);
    let p = d.int(1, 5);
    let mut labels: Vec<ConeLabel> = (0..p).map(|_| all[d.int(0, 5)]).collect();
    labels.push(N);
    let dims: Vec<usize> = labels
        .iter()
        .map(|l| if l.needs_tail() { d.int(2, 4) } else { d.int(1, 4) })
        .collect();
    let n: usize = dims.iter().sum();
    let m = d.int(1, n - 1);
    (m, dims, labels)
}
