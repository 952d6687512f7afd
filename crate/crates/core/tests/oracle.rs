mod common;

use common::random_instance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simeck_dfa::cipher::{encrypt, expand_key, round_forward};
use simeck_dfa::{Block, FaultOracle, FaultSpec, FaultTarget, MasterKey, Variant, Word};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn key(v: Variant) -> MasterKey {
    MasterKey::from_round_keys([0x1918, 0x1110, 0x0908, 0x0100].map(|w: Word| w & v.mask()))
}

fn oracle(v: Variant, seed: u64) -> FaultOracle {
    FaultOracle::new(v, &key(v), Block::new(0x6565, 0x6877), seed)
}

#[test]
fn positions_are_uniform() {
    for v in Variant::ALL {
        let n = v.word_size() as usize;
        let critical = ChiSquared::new((n - 1) as f64).unwrap().inverse_cdf(0.99);
        let mut rejected = 0;
        for seed in 0..20 {
            let mut o = oracle(v, seed);
            let mut counts = vec![0usize; n];
            for _ in 0..10_000 {
                counts[o.next_position() as usize] += 1;
            }
            let expected = 10_000.0 / n as f64;
            let stat: f64 = counts
                .iter()
                .map(|&c| (c as f64 - expected).powi(2) / expected)
                .sum();
            if stat > critical {
                rejected += 1;
            }
        }
        // about one rejection in a hundred is expected at this level
        assert!(rejected <= 2, "{v}: {rejected} of 20 seeds rejected");
    }
}

#[test]
fn same_seed_same_positions() {
    let mut a = oracle(Variant::Simeck48_96, 77);
    let mut b = oracle(Variant::Simeck48_96, 77);
    let mut c = oracle(Variant::Simeck48_96, 78);
    let xs: Vec<_> = (0..200).map(|_| a.inject().faulty).collect();
    let ys: Vec<_> = (0..200).map(|_| b.inject().faulty).collect();
    let zs: Vec<_> = (0..200).map(|_| c.inject().faulty).collect();
    assert_eq!(xs, ys);
    assert_ne!(xs, zs);
}

#[test]
fn reflip_restores_the_correct_run() {
    for v in Variant::ALL {
        let o = oracle(v, 1);
        let keys = expand_key(&key(v), v);
        for round in [0, v.fault_round(), v.rounds()] {
            for position in 0..v.word_size() {
                let spec = FaultSpec { round, position };
                let mut faulty = o.faulty_trace(spec).unwrap();
                faulty[round].x ^= 1 << position;
                let mut state = faulty[round];
                for r in round..v.rounds() {
                    state = round_forward(state, keys.get(r), v);
                }
                assert_eq!(state, o.correct_ciphertext());
            }
        }
    }
}

#[test]
fn flip_in_last_state_changes_one_bit() {
    for v in Variant::ALL {
        let o = oracle(v, 0);
        for position in 0..v.word_size() {
            let pair = o
                .inject_fault_at(FaultSpec {
                    round: v.rounds(),
                    position,
                })
                .unwrap();
            assert_eq!(pair.correct().x ^ pair.faulty().x, 1 << position);
            assert_eq!(pair.correct().y, pair.faulty().y);
        }
    }
}

#[test]
fn correct_ciphertext_is_shared_and_faults_always_show() {
    for v in Variant::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let (key, p) = random_instance(v, &mut rng);
            let mut o = FaultOracle::new(v, &key, p, rng.random());
            let expected = encrypt(p, &key, v);
            assert_eq!(o.correct_ciphertext(), expected);
            let pair = o.inject_fault(v.fault_round()).unwrap();
            assert_eq!(pair.correct(), expected);
            assert_ne!(pair.correct(), pair.faulty());
            assert!(pair.true_position() < v.word_size());
            let trace = o.faulty_trace(pair.spec()).unwrap();
            assert_eq!(trace[v.rounds()], pair.faulty());
            assert_eq!(
                trace[v.fault_round()].x ^ o.trace()[v.fault_round()].x,
                1 << pair.true_position()
            );
        }
    }
}

#[test]
fn out_of_range_requests_are_rejected() {
    for v in Variant::ALL {
        let mut o = oracle(v, 0);
        assert!(o.inject_fault(v.rounds() + 1).is_err());
        assert!(o
            .inject_fault_at(FaultSpec {
                round: 0,
                position: v.word_size()
            })
            .is_err());
        assert!(o
            .inject_fault_at(FaultSpec {
                round: v.rounds() + 1,
                position: 0
            })
            .is_err());
    }
}

/// Bit `j` of `D^{t+i}` relative to the flip at `(t, l)`, with `j` taken mod n.
struct Run {
    v: Variant,
    l: i64,
    deltas: Vec<Word>,
}

impl Run {
    fn new(v: Variant, rng: &mut ChaCha8Rng) -> Run {
        let (key, p) = random_instance(v, rng);
        let o = FaultOracle::new(v, &key, p, 0);
        let spec = FaultSpec {
            round: v.fault_round(),
            position: rng.random_range(0..v.word_size()),
        };
        let clean = o.trace();
        let faulty = o.faulty_trace(spec).unwrap();
        let deltas = (spec.round..=v.rounds())
            .map(|r| clean[r].x ^ faulty[r].x)
            .collect();
        Run {
            v,
            l: spec.position as i64,
            deltas,
        }
    }

    fn bit(&self, i: usize, j: i64) -> u32 {
        self.v.bit(self.deltas[i], self.l + j)
    }
}

#[test]
fn first_round_support() {
    for v in Variant::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let run = Run::new(v, &mut rng);
            let allowed = [0, 1, 5]
                .iter()
                .fold(0, |m, &k| m | (1 << v.index(run.l + k)));
            assert_eq!(run.deltas[1] & !allowed, 0);
        }
    }
}

#[test]
fn forced_cells_after_a_flip() {
    for v in Variant::ALL {
        let n = v.word_size() as i64;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..1000 {
            let run = Run::new(v, &mut rng);
            for i in 0..=(n / 5).min(4) as usize {
                assert_eq!(run.bit(i, i as i64), 1, "{v} i={i}");
            }
            for i in 1..=3usize {
                for j in (i as i64 + 1)..=4 {
                    assert_eq!(run.bit(i, j), 0, "{v} i={i} j={j}");
                }
            }
            // the zero band right of the second branch stops short of bit 10
            for i in 2..=4usize {
                for j in (i as i64 + 5)..=9 {
                    assert_eq!(run.bit(i, j), 0, "{v} i={i} j={j}");
                }
            }
            for i in 1..=4usize {
                for j in (5 * i as i64 + 1)..n {
                    assert_eq!(run.bit(i, j), 0, "{v} i={i} j={j}");
                }
            }
        }
    }
}

#[test]
fn cells_past_bit_nine_vary() {
    // the band i + 5 ..= i + 8 is not all forced: these cells take both values
    for v in Variant::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let runs: Vec<Run> = (0..1000).map(|_| Run::new(v, &mut rng)).collect();
        for (i, j) in [(2, 10), (3, 10), (3, 11), (4, 10), (4, 11), (4, 12)] {
            let ones = runs.iter().filter(|r| r.bit(i, j) == 1).count();
            assert!(ones > 0 && ones < runs.len(), "{v} i={i} j={j}: {ones}");
        }
    }
}
