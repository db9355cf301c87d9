//! Random ensemble generators shared by the integration suites.
#![allow(dead_code)]

pub mod oracles;

use maxplus_csr::{Ensemble, MaxPlus, MaxPlusMatrix, Profile, Word};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Square matrix with each entry present with probability `density`, integer weights in `lo..=hi`.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, density: f64, lo: i32, hi: i32) -> MaxPlusMatrix {
    MaxPlusMatrix::from_fn(n, n, |_, _| {
        if rng.gen_bool(density) {
            MaxPlus::from(rng.gen_range(lo..=hi))
        } else {
            MaxPlus::EPSILON
        }
    })
}

pub fn random_word(rng: &mut ChaCha8Rng, letters: usize, k: usize) -> Word {
    Word::new((0..k).map(|_| rng.gen_range(0..letters)).collect()).unwrap()
}

/// Edge layout shared by all generators: `zero` edges weigh 0 everywhere, `negative`
/// edges get an independent weight in `-20..=-1` per generator.
struct Layout {
    n: usize,
    zero: Vec<(usize, usize)>,
    negative: Vec<(usize, usize)>,
}

impl Layout {
    fn generators(&self, rng: &mut ChaCha8Rng, count: usize) -> Vec<MaxPlusMatrix> {
        (0..count)
            .map(|_| {
                let mut m = MaxPlusMatrix::epsilon(self.n, self.n);
                for &(i, j) in &self.zero {
                    m.set(i, j, MaxPlus::ZERO);
                }
                for &(i, j) in &self.negative {
                    m.set(i, j, MaxPlus::from(rng.gen_range(-20..=-1)));
                }
                m
            })
            .collect()
    }

    fn add_negative(&mut self, e: (usize, usize)) {
        if !self.zero.contains(&e) && !self.negative.contains(&e) {
            self.negative.push(e);
        }
    }
}

/// Generators whose critical digraph is one 0-weight cycle with chords, every other
/// edge negative, and every edge respecting a partition into `p` classes.
/// Rejection-sampled until the profile is P0.
pub fn random_p0_generators(rng: &mut ChaCha8Rng, max_n: usize, max_gens: usize) -> Vec<MaxPlusMatrix> {
    loop {
        let n = rng.gen_range(2..=max_n);
        let p = *[1usize, 1, 2, 3].choose(rng).unwrap();
        if p > n {
            continue;
        }
        let mut nodes: Vec<usize> = (0..n).collect();
        nodes.shuffle(rng);
        let m = rng.gen_range(1..=n / p);
        let q = p * m;
        let critical = &nodes[..q];
        let mut class = vec![0usize; n];
        for (t, &c) in critical.iter().enumerate() {
            class[c] = t % p;
        }
        for &u in &nodes[q..] {
            class[u] = rng.gen_range(0..p);
        }
        let steps = |u: usize, v: usize| class[v] == (class[u] + 1) % p;
        let mut layout = Layout {
            n,
            zero: (0..q).map(|t| (critical[t], critical[(t + 1) % q])).collect(),
            negative: Vec::new(),
        };
        layout.zero.dedup();
        for &u in critical {
            for &v in critical {
                if steps(u, v) && !layout.zero.contains(&(u, v)) && rng.gen_bool(0.25) {
                    layout.zero.push((u, v));
                }
            }
        }
        for &u in &nodes[q..] {
            let into: Vec<usize> = (0..n).filter(|&x| x != u && steps(x, u)).collect();
            let from: Vec<usize> = (0..n).filter(|&x| x != u && steps(u, x)).collect();
            if let (Some(&a), Some(&b)) = (into.choose(rng), from.choose(rng)) {
                layout.add_negative((a, u));
                layout.add_negative((u, b));
            }
        }
        for u in 0..n {
            for v in 0..n {
                if steps(u, v) && rng.gen_bool(0.3) {
                    layout.add_negative((u, v));
                }
            }
        }
        let count = rng.gen_range(1..=max_gens);
        let gens = layout.generators(rng, count);
        if let Ok(e) = Ensemble::build(gens.clone()) {
            if e.report.profile == Profile::P0 && e.report.irreducible && e.report.visualised {
                return gens;
            }
        }
    }
}

/// Visualised irreducible generators with one or two critical components and λ* < 0
/// (or no cycle off the critical nodes). Any profile.
pub fn random_visualised_generators(rng: &mut ChaCha8Rng, max_n: usize, max_gens: usize) -> Vec<MaxPlusMatrix> {
    loop {
        let n = rng.gen_range(2..=max_n);
        let mut nodes: Vec<usize> = (0..n).collect();
        nodes.shuffle(rng);
        let comps = if n >= 3 { rng.gen_range(1..=2) } else { 1 };
        let mut layout = Layout {
            n,
            zero: Vec::new(),
            negative: Vec::new(),
        };
        let mut used = 0;
        for _ in 0..comps {
            let len = rng.gen_range(1..=(n - used).min(3));
            let cyc = &nodes[used..used + len];
            for t in 0..len {
                layout.zero.push((cyc[t], cyc[(t + 1) % len]));
            }
            if len == 3 && rng.gen_bool(0.3) {
                layout.zero.push((cyc[0], cyc[2]));
            }
            used += len;
            if used == n {
                break;
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        for t in 0..n {
            layout.add_negative((order[t], order[(t + 1) % n]));
        }
        for u in 0..n {
            for v in 0..n {
                if rng.gen_bool(0.2) {
                    layout.add_negative((u, v));
                }
            }
        }
        let count = rng.gen_range(1..=max_gens);
        let gens = layout.generators(rng, count);
        if let Ok(e) = Ensemble::build(gens.clone()) {
            let r = &e.report;
            if r.irreducible && r.strongly_equivalent && r.visualised && r.sup_normalized {
                return gens;
            }
        }
    }
}

pub fn p0_ensemble(seed: u64, max_n: usize, max_gens: usize) -> Ensemble {
    Ensemble::build(random_p0_generators(&mut rng(seed), max_n, max_gens)).unwrap()
}

pub fn visualised_ensemble(seed: u64, max_n: usize, max_gens: usize) -> Ensemble {
    Ensemble::build(random_visualised_generators(&mut rng(seed), max_n, max_gens)).unwrap()
}
