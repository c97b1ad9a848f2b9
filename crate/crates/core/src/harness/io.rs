use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cap::{CapSet, Label};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldCtx, Moduli};
use crate::pg::{self, ProjPoint};

/// On-disk form of a cap: parameters, the tower moduli it was built over,
/// and its points in canonical encodings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapFile {
    pub p: u32,
    pub h: u32,
    pub n: u32,
    pub moduli: Moduli,
    pub alpha: Elem,
    pub points: Vec<ProjPoint>,
    pub labels: Vec<Label>,
}

impl CapFile {
    pub fn from_cap(ctx: &FieldCtx, cap: &CapSet) -> Result<Self> {
        Ok(CapFile {
            p: ctx.p(),
            h: ctx.h(),
            n: ctx.n()?,
            moduli: ctx.moduli().clone(),
            alpha: cap.alpha,
            points: cap.points.clone(),
            labels: cap.labels.clone(),
        })
    }

    /// Rebuilds the tower and checks it matches the recorded moduli.
    pub fn into_cap(self) -> Result<(FieldCtx, CapSet)> {
        let ctx = FieldCtx::make_tower(self.p, self.h, self.n)?;
        if ctx.moduli() != &self.moduli {
            return Err(Error::Format("moduli differ from this build's tower".into()));
        }
        let k = ctx.fk().order();
        for p in &self.points {
            if p.a.0 >= k || p.b.0 >= k || !pg::is_canonical(&ctx, p.a, p.b) {
                return Err(Error::Format(format!("point ({}, {}) is not canonical", p.a, p.b)));
            }
        }
        let cap = CapSet::new(self.alpha, self.points, self.labels)?;
        Ok((ctx, cap))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?)?;
    Ok(())
}

pub fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn save_cap(path: &Path, ctx: &FieldCtx, cap: &CapSet) -> Result<()> {
    save_json(path, &CapFile::from_cap(ctx, cap)?)
}

pub fn load_cap(path: &Path) -> Result<(FieldCtx, CapSet)> {
    load_json::<CapFile>(path)?.into_cap()
}
