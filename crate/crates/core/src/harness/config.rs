use serde::{Deserialize, Serialize};

use crate::cap::{self, CapSet, DEFAULT_MAX_SPACE};
use crate::error::{Error, Result};
use crate::field::{poly, Elem, FieldCtx};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeFlag {
    Exhaustive,
    Certificate,
    /// Both modes where the exhaustive pass fits the bound.
    #[default]
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: u32,
    pub h: u32,
    pub n: u32,
    pub alpha: Option<u32>,
    pub mode: ModeFlag,
    pub max_space: u64,
    pub syndrome_bound: u64,
    pub threads: Option<usize>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 3,
            h: 1,
            n: 1,
            alpha: None,
            mode: ModeFlag::Both,
            max_space: DEFAULT_MAX_SPACE,
            syndrome_bound: crate::codes::DEFAULT_SYNDROME_BOUND,
            threads: None,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn context(&self) -> Result<FieldCtx> {
        FieldCtx::make_tower(self.p, self.h, self.n)
    }

    pub fn build(&self) -> Result<(FieldCtx, CapSet)> {
        let ctx = self.context()?;
        let alpha = match self.alpha {
            Some(a) => Elem(a),
            None => cap::pick_alpha(&ctx),
        };
        let cap = cap::build_cap_with_alpha(&ctx, alpha)?;
        Ok((ctx, cap))
    }
}

/// `q = p^h` with `p` prime.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    let p = (2..=q)
        .find(|d| q.is_multiple_of(*d))
        .ok_or_else(|| Error::Unsupported(format!("q = {q}")))?;
    let (mut rest, mut h) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    if rest != 1 || !poly::is_prime(u64::from(p)) {
        return Err(Error::Unsupported(format!("{q} is not a prime power")));
    }
    Ok((p, h))
}

/// Sizes the global rayon pool; later calls are ignored.
pub fn init_threads(threads: Option<usize>) {
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}
