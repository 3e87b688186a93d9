//! Seeded generator of small abstract data.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spherindex::linalg::{q, IntMatrix, RatMatrix, Q};
use spherindex::restriction::{restrict_datum, RestrictedDatum};
use spherindex::roots::{DynkinComponent, Family};
use spherindex::spherical::SphericalDatumK;
use spherindex::tits::StarAction;
use spherindex::validation::has_errors;

struct Block {
    pairing: Vec<Vec<Q>>,
    sigma: Vec<Vec<Q>>,
    /// Star as an integer matrix on the block's coordinates.
    star: Vec<Vec<i64>>,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn root_block(rng: &mut ChaCha8Rng) -> Block {
    let choices = [(Family::A, 1), (Family::A, 2), (Family::A, 3), (Family::B, 2), (Family::G, 2)];
    let (family, rank) = choices[rng.gen_range(0..choices.len())];
    let comp = DynkinComponent::new(family, rank, "c").unwrap();
    let g = comp.gram();
    let n = rank;
    let cartan: Vec<Vec<Q>> =
        (0..n).map(|i| (0..n).map(|j| q(2) * g.get(i, j) / g.get(j, j)).collect()).collect();
    let weight = rng.gen_bool(0.4);
    let (pairing, sigma) = if weight {
        // Basis of fundamental weights: σ_i = Σ_j c_ij ω_j.
        let c = RatMatrix::from_rows(&cartan, n);
        let ci = c.inverse().unwrap();
        let p = ci.mul(&g).mul(&ci.transpose());
        (p.row_vecs(), cartan.clone())
    } else if n == 1 && rng.gen_bool(0.5) {
        // σ = 2e with the form rescaled.
        (vec![vec![g.get(0, 0) / q(4)]], vec![vec![q(2)]])
    } else {
        let sigma = (0..n).map(|i| (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect();
        (g.row_vecs(), sigma)
    };
    let star = match comp.flip() {
        Some(p) if family == Family::A && rng.gen_bool(0.5) => {
            (0..n).map(|i| (0..n).map(|j| i64::from(p[j] == i)).collect()).collect()
        }
        _ => identity(n),
    };
    Block { pairing, sigma, star }
}

/// The two-dimensional block with `σ = (1, −1)` fixed by `(a, b) ↦ (−b, −a)`.
fn unitary_block() -> Block {
    Block {
        pairing: vec![vec![q(1), q(0)], vec![q(0), q(1)]],
        sigma: vec![vec![q(1), q(-1)]],
        star: vec![vec![0, -1], vec![-1, 0]],
    }
}

/// A direction carrying no spherical root.
fn flat_block() -> Block {
    Block { pairing: vec![vec![q(1)]], sigma: Vec::new(), star: identity(1) }
}

pub fn random_datum(rng: &mut ChaCha8Rng, allow_flat: bool) -> Option<SphericalDatumK> {
    let mut blocks = Vec::new();
    let mut dim = 0;
    let target = rng.gen_range(1..=4);
    while dim < target {
        let pick = rng.gen_range(0..10);
        let b = if pick < 7 {
            root_block(rng)
        } else if pick < 9 {
            unitary_block()
        } else if allow_flat {
            flat_block()
        } else {
            continue;
        };
        if dim + b.pairing.len() > 4 {
            break;
        }
        dim += b.pairing.len();
        blocks.push(b);
    }
    if dim == 0 {
        return None;
    }
    let mut pairing = vec![vec![q(0); dim]; dim];
    let mut star = vec![vec![0i64; dim]; dim];
    let mut sigma = Vec::new();
    let mut off = 0;
    for b in &blocks {
        let n = b.pairing.len();
        for i in 0..n {
            for j in 0..n {
                pairing[off + i][off + j] = b.pairing[i][j].clone();
                star[off + i][off + j] = b.star[i][j];
            }
        }
        for s in &b.sigma {
            let mut v = vec![q(0); dim];
            for (i, x) in s.iter().enumerate() {
                v[off + i] = x.clone();
            }
            sigma.push(v);
        }
        off += n;
    }
    let compact: Vec<usize> = (0..sigma.len()).filter(|_| rng.gen_bool(0.2)).collect();
    let refs: Vec<&[i64]> = star.iter().map(|r| r.as_slice()).collect();
    let gens = if star == identity(dim) { Vec::new() } else { vec![IntMatrix::from_i64(&refs)] };
    let star = StarAction::new(dim, gens).ok()?;
    SphericalDatumK::abstract_lattice(RatMatrix::from_rows(&pairing, dim), star, sigma, compact, None).ok()
}

/// `count` data passing validation and restriction, from a fixed seed.
/// Candidates rejected by validation or with a non-convex cone (when asked)
/// are skipped.
pub fn valid_data(seed: u64, count: usize, convex_only: bool) -> Vec<(SphericalDatumK, RestrictedDatum)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 100 * count, "generator yields too few valid data");
        let Some(d) = random_datum(&mut rng, !convex_only) else { continue };
        if has_errors(&d.validate()) {
            continue;
        }
        let rd = match restrict_datum(&d) {
            Ok(rd) => rd,
            Err(e) if !e.is_theorem_violation() => continue,
            Err(e) => panic!("valid datum fails to restrict: {e}"),
        };
        if convex_only && !rd.is_convex() {
            continue;
        }
        out.push((d, rd));
    }
    out
}
