//! First-quantized reference calculations, written without the library's
//! Fock machinery: the amplitude for photons in input modes `n` to leave in
//! output modes `m` is `perm(U[m, n]) / sqrt(prod n! prod m!)`.

#![allow(dead_code)]

use num_complex::Complex64 as C;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Single-photon transfer matrix, `u[out][in]`.
#[derive(Clone)]
pub struct Optics {
    pub u: Vec<Vec<C>>,
}

impl Optics {
    pub fn identity(n: usize) -> Self {
        let mut u = vec![vec![c(0.0, 0.0); n]; n];
        for (i, row) in u.iter_mut().enumerate() {
            row[i] = c(1.0, 0.0);
        }
        Optics { u }
    }

    /// Follows the current optics with `m` acting on modes `(i, j)`.
    pub fn then(mut self, m: [[C; 2]; 2], i: usize, j: usize) -> Self {
        let n = self.u.len();
        for col in 0..n {
            let (x, y) = (self.u[i][col], self.u[j][col]);
            self.u[i][col] = m[0][0] * x + m[0][1] * y;
            self.u[j][col] = m[1][0] * x + m[1][1] * y;
        }
        self
    }
}

pub fn hwp(t: f64) -> [[C; 2]; 2] {
    let (s, k) = (2.0 * t).sin_cos();
    [[c(k, 0.0), c(s, 0.0)], [c(s, 0.0), c(-k, 0.0)]]
}

pub fn qwp(t: f64) -> [[C; 2]; 2] {
    // R(t) diag(1, i) R(-t)
    let (s, k) = t.sin_cos();
    let i = c(0.0, 1.0);
    [
        [k * k + i * s * s, k * s - i * k * s],
        [s * k - i * s * k, s * s + i * k * k],
    ]
}

pub fn balanced_bs() -> [[C; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [[c(h, 0.0), c(0.0, h)], [c(0.0, h), c(h, 0.0)]]
}

/// Ryser's formula.
pub fn permanent(m: &[Vec<C>]) -> C {
    let n = m.len();
    if n == 0 {
        return c(1.0, 0.0);
    }
    let mut total = c(0.0, 0.0);
    for set in 1u32..(1 << n) {
        let mut prod = c(1.0, 0.0);
        for row in m {
            let s: C = (0..n).filter(|k| set & (1 << k) != 0).map(|k| row[k]).sum();
            prod *= s;
        }
        let sign = if (n - set.count_ones() as usize).is_multiple_of(2) { 1.0 } else { -1.0 };
        total += prod * sign;
    }
    total
}

fn fact(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn expand(occ: &[usize]) -> Vec<usize> {
    occ.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k)).collect()
}

pub fn transition(o: &Optics, input: &[usize], output: &[usize]) -> C {
    let (ins, outs) = (expand(input), expand(output));
    if ins.len() != outs.len() {
        return c(0.0, 0.0);
    }
    let sub: Vec<Vec<C>> = outs.iter().map(|&r| ins.iter().map(|&k| o.u[r][k]).collect()).collect();
    let norm: f64 = input.iter().chain(output).map(|&k| fact(k)).product();
    permanent(&sub) / norm.sqrt()
}

/// `(a_h, a_v, b_h, b_v, amplitude)` of the `n`-pair singlet.
pub fn singlet(n: usize) -> Vec<([usize; 4], f64)> {
    let w = 1.0 / ((n + 1) as f64).sqrt();
    (0..=n)
        .map(|m| {
            let s = if m % 2 == 0 { w } else { -w };
            ([n - m, m, m, n - m], s)
        })
        .collect()
}

/// Heralds the `a` half of the `n`-pair singlet: `a_h`, `a_v` enter modes
/// 0 and 1 of `optics` (other inputs in vacuum) and every output mode must
/// hold exactly one photon. Returns the unnormalized `b` amplitudes keyed
/// by `(b_h, b_v)`.
pub fn herald_singlet(optics: &Optics, n: usize) -> Vec<((usize, usize), C)> {
    let modes = optics.u.len();
    let out = vec![1usize; modes];
    singlet(n)
        .into_iter()
        .map(|(o, amp)| {
            let mut input = vec![0usize; modes];
            input[0] = o[0];
            input[1] = o[1];
            ((o[2], o[3]), transition(optics, &input, &out) * amp)
        })
        .filter(|(_, a)| a.norm() > 0.0)
        .collect()
}

pub fn probability(amps: &[((usize, usize), C)]) -> f64 {
    amps.iter().map(|(_, a)| a.norm_sqr()).sum()
}

/// The two-leaf wiring: modes (x_h, x_v, y_h, y_v); balanced splitter per
/// polarization, `hwp(pi/8)` on x, `qwp(pi/4)` on y.
pub fn four_photon_optics() -> Optics {
    use std::f64::consts::PI;
    Optics::identity(4)
        .then(balanced_bs(), 0, 2)
        .then(balanced_bs(), 1, 3)
        .then(hwp(PI / 8.0), 0, 1)
        .then(qwp(PI / 4.0), 2, 3)
}

/// The four-leaf wiring: leaves 1..4 occupy modes (2k, 2k+1); the input
/// enters leaf 1; splitters 1-3, then 1-2 and 3-4; half-wave plates at
/// `angles_deg` on the leaves.
pub fn eight_photon_optics(angles_deg: [f64; 4]) -> Optics {
    let mut o = Optics::identity(8);
    for (x, y) in [(0, 2), (0, 1), (2, 3)] {
        for p in 0..2 {
            o = o.then(balanced_bs(), 2 * x + p, 2 * y + p);
        }
    }
    for (k, a) in angles_deg.iter().enumerate() {
        o = o.then(hwp(a.to_radians()), 2 * k, 2 * k + 1);
    }
    o
}
