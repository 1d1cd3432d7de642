//! Memo table for section lattices, enabled by `VERIFY_CACHE_DIR`.
//! Entries are HNF matrices, so a hit gives exactly what a recomputation would.

use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};

use arithdiff::arith::q_ratio;
use arithdiff::models::lattice::ZpLattice;
use arithdiff::models::sections::{global_section_lattice, SectionLattice};
use arithdiff::models::IdealSpec;
use arithdiff::LevelParams;

pub const CACHE_ENV: &str = "VERIFY_CACHE_DIR";

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn entry_path(dir: &std::path::Path, p: u64, n: u32, d: u32) -> PathBuf {
    dir.join(format!("lattice-p{p}-n{n}-d{d}.json"))
}

/// The lattice does not depend on `m`; only the level scalar does.
pub fn section_lattice(spec: &IdealSpec, params: &LevelParams) -> SectionLattice {
    let Some(dir) = cache_dir() else {
        return global_section_lattice(spec, params);
    };
    let path = entry_path(&dir, params.p.get(), spec.n, spec.d);
    let cached = std::fs::read_to_string(&path)
        .ok()
        .and_then(|t| serde_json::from_str::<ZpLattice>(&t).ok())
        .filter(|l| l.p == params.p && l.dim == (2 * spec.d + 1) as usize);
    if let Some(lattice) = cached {
        return SectionLattice {
            p: params.p.get(),
            n: spec.n,
            d: spec.d,
            m: params.m,
            lattice,
            level_scalar: q_ratio(spec.d as u64, params),
        };
    }
    let sl = global_section_lattice(spec, params);
    // best effort: a failed write only costs a recomputation later
    if std::fs::create_dir_all(&dir).is_ok() {
        let k = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = path.with_extension(format!("tmp{}-{k}", std::process::id()));
        if let Ok(text) = serde_json::to_string(&sl.lattice) {
            if std::fs::write(&tmp, text).is_ok() {
                let _ = std::fs::rename(&tmp, &path);
            }
        }
    }
    sl
}
