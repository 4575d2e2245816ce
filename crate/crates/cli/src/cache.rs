//! Content-addressed store of family members: `(ring, spec, n)` maps to the
//! canonical ideal and its lengths, one JSON file per key.

use std::path::{Path, PathBuf};

use asymlen::asymptotics::{member_length, prepare_members};
use asymlen::{Error as CoreError, GradedFamily, Length};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub ring: Vec<String>,
    pub spec: String,
    pub n: u32,
    /// `ℓ(R/I_n)`, absent when infinite.
    pub colength: Option<u128>,
    /// Entry of the length sequence: the colength, or `ℓ(I_n^sat / I_n)`.
    pub length: u128,
    pub ideal: Option<String>,
}

#[derive(Debug)]
pub struct ResultCache {
    dir: PathBuf,
    pending: Vec<Member>,
}

impl ResultCache {
    pub fn new(dir: &Path) -> Self {
        Self { dir: dir.to_path_buf(), pending: Vec::new() }
    }

    fn path(&self, ring: &[String], spec: &str, n: u32) -> PathBuf {
        let mut h = Sha256::new();
        h.update(b"asymlen-member-v1\n");
        h.update(ring.join(",").as_bytes());
        h.update(b"\n");
        h.update(spec.as_bytes());
        h.update(format!("\n{n}").as_bytes());
        self.dir.join(format!("{}.json", hex::encode(h.finalize())))
    }

    fn get(&self, ring: &[String], spec: &str, n: u32, need_ideal: bool) -> Option<Member> {
        let text = std::fs::read_to_string(self.path(ring, spec, n)).ok()?;
        let m: Member = serde_json::from_str(&text).ok()?;
        let usable = m.ring == ring && m.spec == spec && m.n == n && (!need_ideal || m.ideal.is_some());
        usable.then_some(m)
    }

    /// Writes the entries computed since the last flush.
    pub fn flush(&mut self) -> Result<()> {
        if self.pending.is_empty() {
            return Ok(());
        }
        std::fs::create_dir_all(&self.dir).map_err(CliError::io(format!("creating {}", self.dir.display())))?;
        for m in std::mem::take(&mut self.pending) {
            let path = self.path(&m.ring, &m.spec, m.n);
            let text = serde_json::to_string(&m).map_err(|e| CliError::Internal(e.to_string()))?;
            std::fs::write(&path, text).map_err(CliError::io(format!("writing {}", path.display())))?;
        }
        Ok(())
    }
}

/// Members `1..=max_n`, taken from the cache where possible.
pub fn members(
    family: &GradedFamily,
    max_n: u32,
    need_ideal: bool,
    mut cache: Option<&mut ResultCache>,
) -> Result<Vec<Member>> {
    if let Some(k) = family.max_index() {
        if k < max_n {
            return Err(CoreError::TableOutOfRange { index: max_n, len: k as usize + 1 }.into());
        }
    }
    let ring = family.ring().names().to_vec();
    let spec = family.spec().to_string();
    let mut found: Vec<Option<Member>> = (1..=max_n)
        .map(|n| cache.as_deref().and_then(|c| c.get(&ring, &spec, n, need_ideal)))
        .collect();
    let missing: Vec<u32> = (1..=max_n).filter(|&n| found[n as usize - 1].is_none()).collect();
    if let Some(&last) = missing.last() {
        prepare_members(family, last)?;
        let computed: Vec<Member> = missing
            .par_iter()
            .map(|&n| -> Result<Member> {
                let colength = match family.colength_at(n)? {
                    Length::Finite(v) => Some(v),
                    Length::Infinite => None,
                };
                let length = match colength {
                    Some(v) => v,
                    None => member_length(family, n)?,
                };
                let ideal = if need_ideal { Some(family.member_ideal(n)?.to_string()) } else { None };
                Ok(Member { ring: ring.clone(), spec: spec.clone(), n, colength, length, ideal })
            })
            .collect::<Result<_>>()?;
        for m in computed {
            let i = m.n as usize - 1;
            if let Some(c) = cache.as_deref_mut() {
                c.pending.push(m.clone());
            }
            found[i] = Some(m);
        }
    }
    Ok(found.into_iter().map(|m| m.expect("every index filled")).collect())
}
