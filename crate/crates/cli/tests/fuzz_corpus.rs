//! Runs the checked-in fuzz seeds, and cheap byte mutations of them, through the same
//! checks as the fuzz targets so that stable builds exercise the parsers too.

use std::path::{Path, PathBuf};

use dshell_cli::config::{parse_grid, parse_number, MAX_GRID};
use dshell_cli::{commands, parse_angle, parse_config};
use dshell_fem::mm;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds for {target}");
    files.iter().map(|f| std::fs::read(f).unwrap()).collect()
}

/// Seeds followed by mutants: byte flips, insertions, deletions and splices.
fn inputs(target: &str, mutants: usize) -> Vec<Vec<u8>> {
    let base = seeds(target);
    let mut rng = ChaCha8Rng::seed_from_u64(0xf022);
    let mut out = base.clone();
    for _ in 0..mutants {
        let mut s = base[rng.gen_range(0..base.len())].clone();
        for _ in 0..rng.gen_range(1..4) {
            match rng.gen_range(0..4) {
                0 if !s.is_empty() => {
                    let i = rng.gen_range(0..s.len());
                    s[i] = rng.gen();
                }
                1 => {
                    let i = rng.gen_range(0..=s.len());
                    s.insert(i, b"-:,.0123456789e\"[]{}%deg "[rng.gen_range(0..25)]);
                }
                2 if !s.is_empty() => {
                    let i = rng.gen_range(0..s.len());
                    s.remove(i);
                }
                _ => {
                    let other = &base[rng.gen_range(0..base.len())];
                    let cut = rng.gen_range(0..=s.len());
                    let from = rng.gen_range(0..=other.len());
                    s.truncate(cut);
                    s.extend_from_slice(&other[from..]);
                }
            }
        }
        out.push(s);
    }
    out
}

#[test]
fn config_seeds() {
    let mut accepted = 0;
    for data in inputs("parse_config", 3000) {
        let Ok(text) = std::str::from_utf8(&data) else { continue };
        let Ok(cfg) = parse_config(text) else { continue };
        accepted += 1;
        assert_eq!(parse_config(&cfg.to_json()).unwrap(), cfg, "{text}");
        if let Some(cmd) = cfg.command {
            let _ = commands::resolve(cmd, &cfg);
        }
    }
    assert!(accepted >= 5);
}

#[test]
fn angle_seeds() {
    for data in inputs("parse_angle", 3000) {
        let Ok(text) = std::str::from_utf8(&data) else { continue };
        if let Ok(v) = parse_angle(text) {
            assert!(v.is_finite(), "{text:?}");
        }
    }
}

#[test]
fn grid_seeds() {
    for data in inputs("parse_grid", 3000) {
        let Ok(text) = std::str::from_utf8(&data) else { continue };
        if let Ok(v) = parse_grid(text, parse_number) {
            assert!(!v.is_empty());
            assert!(v.len() <= MAX_GRID.max(text.len()));
            assert!(v.iter().all(|x| x.is_finite()), "{text:?}");
        }
    }
}

#[test]
fn matrix_market_seeds() {
    let mut accepted = 0;
    for data in inputs("parse_matrix_market", 3000) {
        let Ok(text) = std::str::from_utf8(&data) else { continue };
        if let Ok(m) = mm::parse(text) {
            accepted += 1;
            for &(r, c, v) in &m.entries {
                assert!(c <= r && r < m.n);
                assert!(r != c || v.im == 0.0);
            }
        }
    }
    assert!(accepted >= 2);
}
