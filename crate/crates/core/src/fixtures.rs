//! The four bundled partial dynamical systems.

use crate::pdsys::PartialMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fixture {
    /// `X = {0}`, `α = id`.
    Id,
    /// `X = {0,1,2}`, `α ≡ 0`.
    Const3,
    /// `X = {0,1,2}`, `Δ₁ = {0,1}`, `0 ↦ 1`, `1 ↦ 2`.
    Shift3,
    /// `X = {0,1,2}`, `0 ↦ 0`, `1 ↦ 0`, `2 ↦ 1`.
    Merge,
}

impl Fixture {
    pub const ALL: [Fixture; 4] = [Fixture::Id, Fixture::Const3, Fixture::Shift3, Fixture::Merge];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Id => "S_id",
            Fixture::Const3 => "S_const3",
            Fixture::Shift3 => "S_shift3",
            Fixture::Merge => "S_merge",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

pub fn partial_map(f: Fixture) -> PartialMap {
    let map = match f {
        Fixture::Id => vec![Some(0)],
        Fixture::Const3 => vec![Some(0), Some(0), Some(0)],
        Fixture::Shift3 => vec![Some(1), Some(2), None],
        Fixture::Merge => vec![Some(0), Some(0), Some(1)],
    };
    PartialMap::new(map).expect("fixtures are well formed")
}
