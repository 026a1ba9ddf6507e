//! Exact decision procedures for kernel properties.
//!
//! Every failing verdict carries a [`Witness`] holding the two sides of the
//! violated equation, so it can be re-evaluated independently with
//! [`PropertyVerdict::recheck`]. Passing (P) and (T) verdicts carry the
//! full-measure certificate: the union of the positive-mass blocks.
//!
//! "ν-a.e. x" ranges over `support(ν)`. The exceptional set for (P) and (T)
//! must be a union of blocks, so those checks cover every state of every
//! positive-mass block, including zero-mass states inside such a block.

use std::fmt;

use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::event::EventSet;
use crate::instance::Mode;
use crate::measure::{Kernel, Measure};
use crate::partition::Partition;
use crate::rational::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Property {
    #[serde(rename = "S")]
    Stationary,
    #[serde(rename = "R")]
    Reversible,
    #[serde(rename = "SC")]
    SelfCompatible,
    #[serde(rename = "SR")]
    SelfReversible,
    #[serde(rename = "P")]
    Proper,
    #[serde(rename = "T")]
    Total,
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "ac")]
    AbsContinuous,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::Stationary,
        Property::Reversible,
        Property::SelfCompatible,
        Property::SelfReversible,
        Property::Proper,
        Property::Total,
        Property::Trivial,
        Property::AbsContinuous,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Property::Stationary => "S",
            Property::Reversible => "R",
            Property::SelfCompatible => "SC",
            Property::SelfReversible => "SR",
            Property::Proper => "P",
            Property::Total => "T",
            Property::Trivial => "trivial",
            Property::AbsContinuous => "ac",
        }
    }

    pub fn from_code(code: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.code() == code)
    }

    /// Properties that are stated relative to a conditioning partition.
    pub fn needs_partition(self) -> bool {
        matches!(self, Property::Proper | Property::Total | Property::Trivial)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A concrete violation: the defining equation evaluated at specific states or events.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `Σ_x ν(x) R_x(event)` (lhs) differs from `ν(event)` (rhs).
    Event { event: EventSet, lhs: Rat, rhs: Rat },
    /// `∫_e R_x(d) ν(dx)` (lhs) differs from `∫_d R_x(e) ν(dx)` (rhs).
    EventPair { d: EventSet, e: EventSet, lhs: Rat, rhs: Rat },
    /// Detailed balance: `ν(x) r_xy` (lhs) differs from `ν(y) r_yx` (rhs).
    Pair { x: usize, y: usize, lhs: Rat, rhs: Rat },
    /// `(R∘R)_xz` (lhs) differs from `r_xz` (rhs).
    Transition { x: usize, z: usize, lhs: Rat, rhs: Rat },
    /// `r_xy r_yz` (lhs) differs from `r_xz r_zy` (rhs).
    Triple { x: usize, y: usize, z: usize, lhs: Rat, rhs: Rat },
    /// `R_x(event) = value`, which is not an admissible value.
    State { x: usize, event: EventSet, value: Rat },
    /// `R_x(event)` differs from `δ_x(event)`.
    Improper { x: usize, event: EventSet, value: Rat, expected: Rat },
    /// `r_xy > 0` while `ν(y) = 0`.
    Escape { x: usize, y: usize, mass: Rat },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub property: Property,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<EventSet>,
}

impl PropertyVerdict {
    fn pass(property: Property) -> Self {
        PropertyVerdict { property, holds: true, witness: None, certificate: None }
    }

    fn fail(property: Property, witness: Witness) -> Self {
        PropertyVerdict { property, holds: false, witness: Some(witness), certificate: None }
    }

    /// Re-evaluates the stored witness from scratch; true when it still exhibits
    /// exactly the recorded violation. `partition` is the conditioning partition
    /// for (P)/(T)/trivial and the restriction scope for (S)/(R).
    pub fn recheck(&self, r: &Kernel, nu: &Measure, partition: Option<&Partition>) -> bool {
        let Some(w) = &self.witness else { return false };
        let weighted = |a: &EventSet, b: &EventSet| -> Rat {
            a.iter().map(|x| nu.weight(x) * r.mass(x, b)).sum()
        };
        match (self.property, w) {
            (Property::Stationary, Witness::Event { event, lhs, rhs }) => {
                let l = weighted(&EventSet::full(r.n()), event);
                let rr = nu.measure_of_set(event).unwrap_or_default();
                &l == lhs && &rr == rhs && l != rr
            }
            (Property::Reversible, Witness::EventPair { d, e, lhs, rhs }) => {
                let (l, rr) = (weighted(e, d), weighted(d, e));
                &l == lhs && &rr == rhs && l != rr
            }
            (Property::Reversible, Witness::Pair { x, y, lhs, rhs }) => {
                let l = nu.weight(*x) * r.entry(*x, *y);
                let rr = nu.weight(*y) * r.entry(*y, *x);
                &l == lhs && &rr == rhs && l != rr
            }
            (Property::SelfCompatible, Witness::Transition { x, z, lhs, rhs }) => {
                let l: Rat = (0..r.n()).map(|y| r.entry(*x, y) * r.entry(y, *z)).sum();
                nu.weight(*x).is_positive() && &l == lhs && r.entry(*x, *z) == rhs && &l != rhs
            }
            (Property::SelfReversible, Witness::Triple { x, y, z, lhs, rhs }) => {
                let l = r.entry(*x, *y) * r.entry(*y, *z);
                let rr = r.entry(*x, *z) * r.entry(*z, *y);
                nu.weight(*x).is_positive() && &l == lhs && &rr == rhs && l != rr
            }
            (Property::Total, Witness::State { x, event, value }) => {
                let Some(g) = partition else { return false };
                let block = &g.blocks()[g.label_of(*x)];
                let v = r.mass(*x, block);
                block == event && &v == value && !v.is_one()
                    && nu.measure_of_set(block).is_ok_and(|m| m.is_positive())
            }
            (Property::Trivial, Witness::State { x, event, value }) => {
                let Some(g) = partition else { return false };
                let block = &g.blocks()[g.label_of(*x)];
                let v = r.mass(*x, block);
                nu.weight(*x).is_positive() && block == event && &v == value
                    && !v.is_zero() && !v.is_one()
            }
            (Property::Proper, Witness::Improper { x, event, value, expected }) => {
                let Some(g) = partition else { return false };
                let v = r.mass(*x, event);
                let delta = if event.contains(*x) { Rat::one() } else { Rat::zero() };
                let home = &g.blocks()[g.label_of(*x)];
                g.blocks().contains(event) && &v == value && &delta == expected && v != delta
                    && nu.measure_of_set(home).is_ok_and(|m| m.is_positive())
            }
            (Property::AbsContinuous, Witness::Escape { x, y, mass }) => {
                nu.weight(*x).is_positive() && nu.weight(*y).is_zero()
                    && r.entry(*x, *y) == mass && mass.is_positive()
            }
            _ => false,
        }
    }
}

/// Which events (S) and (R) quantify over.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RestrictionScope {
    pub partition: Option<Partition>,
}

impl RestrictionScope {
    pub fn unrestricted() -> Self {
        RestrictionScope { partition: None }
    }

    /// Only events measurable w.r.t. `partition`.
    pub fn restricted(partition: Partition) -> Self {
        RestrictionScope { partition: Some(partition) }
    }
}

/// Runs the checks with either exact or epsilon-tolerant equality.
#[derive(Debug, Clone, Default)]
pub struct Checker {
    epsilon: Option<Rat>,
}

impl Checker {
    pub fn exact() -> Self {
        Checker { epsilon: None }
    }

    pub fn for_mode(mode: &Mode) -> Self {
        match mode {
            Mode::Rational => Checker::exact(),
            Mode::Float { epsilon } => Checker { epsilon: Some(epsilon.clone()) },
        }
    }

    fn eq(&self, a: &Rat, b: &Rat) -> bool {
        match &self.epsilon {
            None => a == b,
            Some(eps) => a == b || (a - b).abs() <= *eps,
        }
    }

    fn dims(r: &Kernel, nu: &Measure, g: Option<&Partition>) -> Result<()> {
        check_dim(r.n(), nu.n())?;
        if let Some(g) = g {
            check_dim(r.n(), g.n())?;
        }
        Ok(())
    }

    pub fn stationary(&self, r: &Kernel, nu: &Measure, scope: &RestrictionScope) -> Result<PropertyVerdict> {
        Self::dims(r, nu, scope.partition.as_ref())?;
        let events: Vec<EventSet> = match &scope.partition {
            None => (0..r.n()).map(|y| EventSet::singleton(y, r.n())).collect::<Result<_>>()?,
            Some(g) => g.blocks().to_vec(),
        };
        for event in events {
            let lhs: Rat = (0..r.n()).map(|x| nu.weight(x) * r.mass(x, &event)).sum();
            let rhs = nu.measure_of_set(&event)?;
            if !self.eq(&lhs, &rhs) {
                return Ok(PropertyVerdict::fail(Property::Stationary, Witness::Event { event, lhs, rhs }));
            }
        }
        Ok(PropertyVerdict::pass(Property::Stationary))
    }

    pub fn reversible(&self, r: &Kernel, nu: &Measure, scope: &RestrictionScope) -> Result<PropertyVerdict> {
        Self::dims(r, nu, scope.partition.as_ref())?;
        match &scope.partition {
            None => {
                for x in 0..r.n() {
                    for y in x + 1..r.n() {
                        let lhs = nu.weight(x) * r.entry(x, y);
                        let rhs = nu.weight(y) * r.entry(y, x);
                        if !self.eq(&lhs, &rhs) {
                            let w = Witness::Pair { x, y, lhs, rhs };
                            return Ok(PropertyVerdict::fail(Property::Reversible, w));
                        }
                    }
                }
            }
            Some(g) => {
                let weighted = |a: &EventSet, b: &EventSet| -> Rat {
                    a.iter().map(|x| nu.weight(x) * r.mass(x, b)).sum()
                };
                let blocks = g.blocks();
                for (i, d) in blocks.iter().enumerate() {
                    for e in &blocks[i + 1..] {
                        let lhs = weighted(e, d);
                        let rhs = weighted(d, e);
                        if !self.eq(&lhs, &rhs) {
                            let w = Witness::EventPair { d: d.clone(), e: e.clone(), lhs, rhs };
                            return Ok(PropertyVerdict::fail(Property::Reversible, w));
                        }
                    }
                }
            }
        }
        Ok(PropertyVerdict::pass(Property::Reversible))
    }

    pub fn self_compatible(&self, r: &Kernel, nu: &Measure) -> Result<PropertyVerdict> {
        Self::dims(r, nu, None)?;
        for x in nu.support().iter() {
            let two_step = r.propagate(&r.row_measure(x))?;
            for z in 0..r.n() {
                let (lhs, rhs) = (two_step.weight(z), r.entry(x, z));
                if !self.eq(lhs, rhs) {
                    let w = Witness::Transition { x, z, lhs: lhs.clone(), rhs: rhs.clone() };
                    return Ok(PropertyVerdict::fail(Property::SelfCompatible, w));
                }
            }
        }
        Ok(PropertyVerdict::pass(Property::SelfCompatible))
    }

    pub fn self_reversible(&self, r: &Kernel, nu: &Measure) -> Result<PropertyVerdict> {
        Self::dims(r, nu, None)?;
        let n = r.n();
        for x in nu.support().iter() {
            for y in 0..n {
                for z in 0..n {
                    if y == z {
                        continue;
                    }
                    let lhs = r.entry(x, y) * r.entry(y, z);
                    let rhs = r.entry(x, z) * r.entry(z, y);
                    if !self.eq(&lhs, &rhs) {
                        let w = Witness::Triple { x, y, z, lhs, rhs };
                        return Ok(PropertyVerdict::fail(Property::SelfReversible, w));
                    }
                }
            }
        }
        Ok(PropertyVerdict::pass(Property::SelfReversible))
    }

    /// Blocks of `g` with positive mass, by index, and their union.
    fn positive_blocks(nu: &Measure, g: &Partition) -> Result<(Vec<usize>, EventSet)> {
        let mut idx = Vec::new();
        let mut union = EventSet::empty(g.n());
        for (i, b) in g.blocks().iter().enumerate() {
            if nu.measure_of_set(b)?.is_positive() {
                idx.push(i);
                union = union.union(b)?;
            }
        }
        Ok((idx, union))
    }

    pub fn proper(&self, r: &Kernel, nu: &Measure, g: &Partition) -> Result<PropertyVerdict> {
        Self::dims(r, nu, Some(g))?;
        let (positive, certificate) = Self::positive_blocks(nu, g)?;
        for &b in &positive {
            for x in g.blocks()[b].iter() {
                for (a, event) in g.blocks().iter().enumerate() {
                    let value = r.mass(x, event);
                    let expected = if a == b { Rat::one() } else { Rat::zero() };
                    if !self.eq(&value, &expected) {
                        let w = Witness::Improper { x, event: event.clone(), value, expected };
                        return Ok(PropertyVerdict::fail(Property::Proper, w));
                    }
                }
            }
        }
        let mut v = PropertyVerdict::pass(Property::Proper);
        v.certificate = Some(certificate);
        Ok(v)
    }

    pub fn total(&self, r: &Kernel, nu: &Measure, g: &Partition) -> Result<PropertyVerdict> {
        Self::dims(r, nu, Some(g))?;
        let (positive, certificate) = Self::positive_blocks(nu, g)?;
        for &b in &positive {
            let block = &g.blocks()[b];
            for x in block.iter() {
                let value = r.mass(x, block);
                if !self.eq(&value, &Rat::one()) {
                    let w = Witness::State { x, event: block.clone(), value };
                    return Ok(PropertyVerdict::fail(Property::Total, w));
                }
            }
        }
        let mut v = PropertyVerdict::pass(Property::Total);
        v.certificate = Some(certificate);
        Ok(v)
    }

    pub fn trivial(&self, r: &Kernel, nu: &Measure, g: &Partition) -> Result<PropertyVerdict> {
        Self::dims(r, nu, Some(g))?;
        for x in nu.support().iter() {
            let block = &g.blocks()[g.label_of(x)];
            let value = r.mass(x, block);
            if !self.eq(&value, &Rat::zero()) && !self.eq(&value, &Rat::one()) {
                let w = Witness::State { x, event: block.clone(), value };
                return Ok(PropertyVerdict::fail(Property::Trivial, w));
            }
        }
        Ok(PropertyVerdict::pass(Property::Trivial))
    }

    pub fn abs_continuous(&self, r: &Kernel, nu: &Measure) -> Result<PropertyVerdict> {
        Self::dims(r, nu, None)?;
        for x in nu.support().iter() {
            for y in 0..r.n() {
                let mass = r.entry(x, y);
                if mass.is_positive() && nu.weight(y).is_zero() {
                    let w = Witness::Escape { x, y, mass: mass.clone() };
                    return Ok(PropertyVerdict::fail(Property::AbsContinuous, w));
                }
            }
        }
        Ok(PropertyVerdict::pass(Property::AbsContinuous))
    }

    /// Dispatches one property; `g` is the conditioning partition for (P)/(T)/trivial
    /// and the restriction scope for (S)/(R) when `restricted` is set.
    pub fn check(
        &self,
        property: Property,
        r: &Kernel,
        nu: &Measure,
        g: &Partition,
        restricted: bool,
    ) -> Result<PropertyVerdict> {
        let scope = if restricted {
            RestrictionScope::restricted(g.clone())
        } else {
            RestrictionScope::unrestricted()
        };
        match property {
            Property::Stationary => self.stationary(r, nu, &scope),
            Property::Reversible => self.reversible(r, nu, &scope),
            Property::SelfCompatible => self.self_compatible(r, nu),
            Property::SelfReversible => self.self_reversible(r, nu),
            Property::Proper => self.proper(r, nu, g),
            Property::Total => self.total(r, nu, g),
            Property::Trivial => self.trivial(r, nu, g),
            Property::AbsContinuous => self.abs_continuous(r, nu),
        }
    }

    pub fn profile(&self, r: &Kernel, nu: &Measure, g: Option<&Partition>, mode: &Mode) -> Result<PropertyProfile> {
        Self::dims(r, nu, g)?;
        let sigma = crate::rcd::sigma_of_kernel_in(r, mode)?;
        let partition = g.cloned().unwrap_or_else(|| sigma.clone());
        let open = RestrictionScope::unrestricted();
        Ok(PropertyProfile {
            stationary: self.stationary(r, nu, &open)?,
            reversible: self.reversible(r, nu, &open)?,
            self_compatible: self.self_compatible(r, nu)?,
            self_reversible: self.self_reversible(r, nu)?,
            proper: self.proper(r, nu, &partition)?,
            total: self.total(r, nu, &partition)?,
            trivial: self.trivial(r, nu, &partition)?,
            abs_continuous: self.abs_continuous(r, nu)?,
            sigma,
            partition,
        })
    }
}

/// All eight verdicts for one (kernel, measure, partition) triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyProfile {
    pub sigma: Partition,
    pub partition: Partition,
    #[serde(rename = "S")]
    pub stationary: PropertyVerdict,
    #[serde(rename = "R")]
    pub reversible: PropertyVerdict,
    #[serde(rename = "SC")]
    pub self_compatible: PropertyVerdict,
    #[serde(rename = "SR")]
    pub self_reversible: PropertyVerdict,
    #[serde(rename = "P")]
    pub proper: PropertyVerdict,
    #[serde(rename = "T")]
    pub total: PropertyVerdict,
    pub trivial: PropertyVerdict,
    #[serde(rename = "ac")]
    pub abs_continuous: PropertyVerdict,
}

impl PropertyProfile {
    pub fn verdicts(&self) -> [&PropertyVerdict; 8] {
        [
            &self.stationary,
            &self.reversible,
            &self.self_compatible,
            &self.self_reversible,
            &self.proper,
            &self.total,
            &self.trivial,
            &self.abs_continuous,
        ]
    }

    pub fn get(&self, property: Property) -> &PropertyVerdict {
        self.verdicts().into_iter().find(|v| v.property == property).expect("all properties present")
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts().iter().all(|v| v.holds)
    }
}

pub fn check_stationary(r: &Kernel, nu: &Measure, scope: &RestrictionScope) -> Result<PropertyVerdict> {
    Checker::exact().stationary(r, nu, scope)
}

pub fn check_reversible(r: &Kernel, nu: &Measure, scope: &RestrictionScope) -> Result<PropertyVerdict> {
    Checker::exact().reversible(r, nu, scope)
}

pub fn check_self_compatible(r: &Kernel, nu: &Measure) -> Result<PropertyVerdict> {
    Checker::exact().self_compatible(r, nu)
}

pub fn check_self_reversible(r: &Kernel, nu: &Measure) -> Result<PropertyVerdict> {
    Checker::exact().self_reversible(r, nu)
}

pub fn check_proper(r: &Kernel, nu: &Measure, g: &Partition) -> Result<PropertyVerdict> {
    Checker::exact().proper(r, nu, g)
}

pub fn check_total(r: &Kernel, nu: &Measure, g: &Partition) -> Result<PropertyVerdict> {
    Checker::exact().total(r, nu, g)
}

pub fn check_trivial(r: &Kernel, nu: &Measure, g: &Partition) -> Result<PropertyVerdict> {
    Checker::exact().trivial(r, nu, g)
}

pub fn check_abs_continuous(r: &Kernel, nu: &Measure) -> Result<PropertyVerdict> {
    Checker::exact().abs_continuous(r, nu)
}

/// Exact profile; `g` defaults to σ(R).
pub fn profile(r: &Kernel, nu: &Measure, g: Option<&Partition>) -> Result<PropertyProfile> {
    Checker::exact().profile(r, nu, g, &Mode::Rational)
}

impl std::str::FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Property> {
        Property::from_code(s).ok_or_else(|| Error::MalformedDocument(format!("unknown property `{s}`")))
    }
}
