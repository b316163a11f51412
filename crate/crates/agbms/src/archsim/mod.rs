//! Clock-level models of the shift-register error-locator architectures.
//!
//! Every architecture stores, per block label i, the two combined series
//!
//!   V^(i) = v^(i) (exponents N..m) + Z^(m+1) f^(i)
//!   W^(i) = w^(i) (exponents N..max(m,N)) + Z^(m+1) g^(i)
//!
//! as a stream of coefficients, lowest exponent first. One loop N takes one
//! period; each coefficient passes the multipliers exactly once per period.
//! The update V <- e V - d W and the switch W <- Z W or Z V act on the
//! streams, "mod Z^N" drops the head, and the extra register in the w/g loop
//! realizes the multiplication by Z.

mod block;
mod resources;
mod serial;

use std::fmt::{self, Write as _};

use thiserror::Error;

pub use block::sim_inverse_free;
pub use resources::{bench_table, resources, Architecture, ResourceEstimate};
pub use serial::{sim_serial, sim_serial_inverse_free};

use crate::agcode::{CodeSpec, SyndromeTable};
use crate::bms::{extract_locators, Block, BmsError, BmsState, BoundaryState, LocatorOutput, Mode, ZPoly};
use crate::curve::MonoIdx;
use crate::galois::FieldElem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("architecture needs a >= 2 blocks")]
    TooFewBlocks,
    #[error("syndrome u{0:?} missing")]
    MissingSyndrome(MonoIdx),
    #[error("register for g_0 of block {label} not cleared at N={n}")]
    ZeroSetting { n: i64, label: usize },
    #[error("multiplier budget {budget} exceeded at clock {clock}")]
    MultiplierBudget { clock: u64, budget: u32 },
    #[error("boundary N={n} differs from the reference algorithm")]
    Mismatch { n: i64 },
    #[error(transparent)]
    Bms(#[from] BmsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArchKind {
    InverseFree,
    Serial,
    SerialInverseFree,
}

impl ArchKind {
    pub fn mode(self) -> Mode {
        match self {
            ArchKind::Serial => Mode::Division,
            _ => Mode::InverseFree,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ArchKind::InverseFree => "inverse_free",
            ArchKind::Serial => "serial",
            ArchKind::SerialInverseFree => "serial_inverse_free",
        }
    }

    pub fn parse(s: &str) -> Option<ArchKind> {
        match s {
            "inverse_free" => Some(ArchKind::InverseFree),
            "serial" => Some(ArchKind::Serial),
            "serial_inverse_free" => Some(ArchKind::SerialInverseFree),
            _ => None,
        }
    }
}

impl fmt::Display for ArchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Named switch states; recomputed every clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Switches {
    /// Discrepancy latch closed (head diverted into the d register).
    pub discrepancy: bool,
    /// A/B: w/g input taken from v/f (update) instead of w/g (preserve).
    pub update: bool,
    /// Exchange mux taking the delayed value.
    pub exchange: bool,
    /// w/g input forced to zero.
    pub zero_set: bool,
}

impl fmt::Display for Switches {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |x: bool| if x { '1' } else { '0' };
        write!(f, "D{}U{}X{}Z{}", b(self.discrepancy), b(self.update), b(self.exchange), b(self.zero_set))
    }
}

/// Register contents of one named sequence at one clock.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegDump {
    pub block: usize,
    pub name: &'static str,
    pub values: Vec<FieldElem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub clock: u64,
    pub regs: Vec<RegDump>,
    pub switches: Vec<Switches>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RegisterCounts {
    /// v/f registers over all blocks.
    pub vf: usize,
    pub wg: usize,
    pub exchange: usize,
    pub supplementary: usize,
}

impl RegisterCounts {
    /// Registers holding polynomial coefficients.
    pub fn polynomial(&self) -> usize {
        self.vf + self.wg + self.exchange
    }
}

/// A discrepancy latch event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Latch {
    pub clock: u64,
    pub n: i64,
    pub label: usize,
    pub d: FieldElem,
    pub e: FieldElem,
}

#[derive(Debug, Clone)]
pub struct ArchTrace {
    pub arch: ArchKind,
    pub period: u64,
    pub total_clocks: u64,
    pub boundary_states: Vec<BoundaryState>,
    /// Last replacement of each w/g label: (deg f copied, loop).
    pub g_origin: Vec<Option<(MonoIdx, i64)>>,
    pub latches: Vec<Latch>,
    pub snapshots: Vec<Snapshot>,
    pub registers: RegisterCounts,
    pub mult_budget: u32,
    pub max_mults_per_clock: u32,
    pub mult_uses: u64,
    pub inv_uses: u64,
    /// Replacement branches taken (condition (P) failed), over the whole run.
    pub replacements: u64,
}

impl ArchTrace {
    /// State at the final boundary in algorithm form.
    pub fn final_state(&self, mode: Mode) -> BmsState {
        let b = self.boundary_states.last().expect("at least one boundary");
        let blocks = (0..b.s1.len())
            .map(|i| Block {
                s1: b.s1[i],
                c1: b.c1[i],
                f: b.f[i].clone(),
                g: b.g[i].clone(),
                v: b.v[i].clone(),
                w: b.w[i].clone(),
                g_origin: self.g_origin[i],
            })
            .collect();
        BmsState { n: b.n, horizon: b.n - 1, mode, blocks }
    }

    pub fn locators(&self, code: &CodeSpec) -> Result<LocatorOutput, BmsError> {
        extract_locators(&self.final_state(self.arch.mode()), &code.curve)
    }

    /// CSV with columns clock, block, reg_name, index, value_log, switch_states.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("clock,block,reg_name,index,value_log,switch_states\n");
        for s in &self.snapshots {
            for r in &s.regs {
                let sw = s.switches.get(r.block).or(s.switches.first()).copied().unwrap_or_default();
                for (k, v) in r.values.iter().enumerate() {
                    let _ = writeln!(out, "{},{},{},{},{},{}", s.clock, r.block, r.name, k + 1, v.log(), sw);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SimOptions {
    /// Keep a register dump for every clock.
    pub record: bool,
}

/// Multiplier and inverter accounting.
pub(crate) struct Meter {
    pub budget: u32,
    pub max: u32,
    pub uses: u64,
    pub invs: u64,
    now: u32,
}

impl Meter {
    pub fn new(budget: u32) -> Meter {
        Meter { budget, max: 0, uses: 0, invs: 0, now: 0 }
    }

    pub fn begin(&mut self) {
        self.now = 0;
    }

    pub fn mul(&mut self, k: u32) {
        self.now += k;
        self.uses += k as u64;
    }

    pub fn inv(&mut self) {
        self.invs += 1;
    }

    pub fn end(&mut self, clock: u64) -> Result<(), SimError> {
        self.max = self.max.max(self.now);
        if self.now > self.budget {
            return Err(SimError::MultiplierBudget { clock, budget: self.budget });
        }
        Ok(())
    }
}

/// Control logic shared by all architectures: degrees, latches and the
/// per-loop branch decisions, read from a pre-loop snapshot.
#[derive(Debug, Clone)]
pub(crate) struct Control {
    pub s1: Vec<i64>,
    pub c1: Vec<i64>,
    pub s1_next: Vec<i64>,
    pub c1_next: Vec<i64>,
    pub g_origin: Vec<Option<(MonoIdx, i64)>>,
    pub replacements: u64,
}

pub(crate) struct Decision {
    pub d: FieldElem,
    pub e: FieldElem,
    pub keep: bool,
}

impl Control {
    pub fn new(code: &CodeSpec) -> Control {
        let curve = &code.curve;
        let a = curve.a() as usize;
        let s1: Vec<i64> = (0..a as u32)
            .map(|i| (0..).find(|&n1| curve.is_canonical(MonoIdx::new(n1, i))).unwrap() as i64)
            .collect();
        let c1: Vec<i64> = s1.iter().map(|s| s - 1).collect();
        Control { s1_next: s1.clone(), c1_next: c1.clone(), s1, c1, g_origin: vec![None; a], replacements: 0 }
    }

    /// Latches d, e for v/f label `i` paired with w/g label `j` and decides (P).
    pub fn decide(&mut self, code: &CodeSpec, n: i64, i: usize, j: usize, x: FieldElem, y: FieldElem) -> Decision {
        let l = code.curve.l_of(i as u32, n);
        let d = match l {
            Some(l) if self.s1[i] <= l.n1 as i64 => x,
            _ => FieldElem::ZERO,
        };
        let mut keep = true;
        if !d.is_zero() {
            let l1 = l.unwrap().n1 as i64;
            if self.s1[i] < l1 - self.c1[j] {
                keep = false;
                self.replacements += 1;
                self.s1_next[i] = l1 - self.c1[j];
                self.c1_next[j] = l1 - self.s1[i];
                self.g_origin[j] = Some((MonoIdx::new(self.s1[i] as u32, i as u32), n));
            }
        }
        Decision { d, e: y, keep }
    }

    pub fn commit(&mut self) {
        self.s1 = self.s1_next.clone();
        self.c1 = self.c1_next.clone();
    }
}

/// Initial V^(i) coefficient at relative position r (exponent r at N = 0).
pub(crate) fn initial_v(code: &CodeSpec, synd: &SyndromeTable, i: usize, r: i64) -> Result<FieldElem, SimError> {
    let curve = &code.curve;
    let m = code.m;
    if r == m + 1 {
        return Ok(FieldElem::ONE);
    }
    if r > m {
        return Ok(FieldElem::ZERO);
    }
    let Some(n) = curve.l_of(i as u32, r) else {
        return Ok(FieldElem::ZERO);
    };
    if !curve.is_regular(n) || curve.spec().excluded.contains(&n) {
        return Ok(FieldElem::ZERO);
    }
    synd.get(n).ok_or(SimError::MissingSyndrome(n))
}

pub(crate) fn initial_w(r: i64) -> FieldElem {
    if r == 0 {
        FieldElem::ONE
    } else {
        FieldElem::ZERO
    }
}

/// Collects register values into a boundary state.
pub(crate) struct Assembler {
    n: i64,
    m: i64,
    f: Vec<ZPoly>,
    g: Vec<ZPoly>,
    v: Vec<ZPoly>,
    w: Vec<ZPoly>,
    err: Option<SimError>,
}

impl Assembler {
    pub fn new(a: usize, n: i64, m: i64) -> Assembler {
        Assembler {
            n,
            m,
            f: vec![ZPoly::default(); a],
            g: vec![ZPoly::default(); a],
            v: vec![ZPoly::default(); a],
            w: vec![ZPoly::default(); a],
            err: None,
        }
    }

    /// V^(label) coefficient at relative position r.
    pub fn put_v(&mut self, label: usize, r: i64, val: FieldElem) {
        let h = self.n + r;
        if h <= self.m {
            self.v[label].set(h, val);
        } else {
            self.f[label].set(h - self.m - 1, val);
        }
    }

    pub fn put_w(&mut self, label: usize, r: i64, val: FieldElem) {
        let h = self.n + r;
        if h <= self.m.max(self.n) {
            self.w[label].set(h, val);
        } else if h == self.m + 1 {
            if !val.is_zero() && self.err.is_none() {
                self.err = Some(SimError::ZeroSetting { n: self.n, label });
            }
        } else {
            self.g[label].set(h - self.m - 1, val);
        }
    }

    pub fn finish(self, ctrl: &Control) -> Result<BoundaryState, SimError> {
        if let Some(e) = self.err {
            return Err(e);
        }
        // g below its head must be clear: g = Z^(N-M) f_M
        for (label, origin) in ctrl.g_origin.iter().enumerate() {
            let lowest = match origin {
                Some((_, mm)) => self.n - mm,
                None => i64::MAX,
            };
            if self.g[label].coeff.keys().any(|&k| k < lowest) {
                return Err(SimError::ZeroSetting { n: self.n, label });
            }
        }
        Ok(BoundaryState { n: self.n, s1: ctrl.s1.clone(), c1: ctrl.c1.clone(), f: self.f, g: self.g, v: self.v, w: self.w })
    }
}

/// Runs a simulator and checks every boundary against the reference algorithm.
pub fn simulate_checked(code: &CodeSpec, synd: &SyndromeTable, arch: ArchKind, opts: SimOptions) -> Result<ArchTrace, SimError> {
    let trace = match arch {
        ArchKind::InverseFree => sim_inverse_free(code, synd, opts)?,
        ArchKind::Serial => sim_serial(code, synd, opts)?,
        ArchKind::SerialInverseFree => sim_serial_inverse_free(code, synd, opts)?,
    };
    let reference = crate::bms::reference_boundaries(&code.curve, synd, arch.mode(), code.m)?;
    for (got, want) in trace.boundary_states.iter().zip(&reference) {
        if got != want {
            return Err(SimError::Mismatch { n: got.n });
        }
    }
    if trace.boundary_states.len() != reference.len() {
        return Err(SimError::Mismatch { n: trace.boundary_states.len() as i64 });
    }
    Ok(trace)
}
