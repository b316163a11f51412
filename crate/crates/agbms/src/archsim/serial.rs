//! One pair of multipliers shared by all labels. Coefficients are interleaved:
//! processing clock tau = a*r + k handles relative position r of slot k. The
//! w/g sequence keeps label omega(k) in slot k; the v/f sequence carries
//! V^(ibar(omega(k))), so every v/f label moves by sigma slots per loop. The
//! exchange register delays the slots that would otherwise arrive early.

use std::collections::VecDeque;

use super::{
    initial_v, initial_w, ArchKind, ArchTrace, Assembler, Control, Latch, Meter, RegDump, RegisterCounts, SimError,
    SimOptions, Snapshot, Switches,
};
use crate::agcode::{CodeSpec, SyndromeTable};
use crate::bms::Mode;
use crate::galois::FieldElem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    /// Division updates, w/g slot k = label k, period a(m+3).
    Division,
    /// Inverse-free updates, w/g slot k = label -k, supplementary registers
    /// delay the head decision by a clocks, period a(m+4).
    Supplementary,
}

/// Register sequence a cell belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reg {
    Vf,
    Wg,
    Exch,
    SuppV,
    SuppW,
}

struct Geometry {
    a: usize,
    len_v: usize,
    len_w: usize,
    supp: bool,
    sigma: usize,
}

impl Geometry {
    fn in_x(&self, k: usize) -> bool {
        k + self.sigma < self.a
    }

    /// Clock, relative to the current loop start, at which the value in
    /// cell q of `reg` reaches the multipliers; None if it is discarded.
    fn clock_of(&self, reg: Reg, q: usize) -> Option<usize> {
        let a = self.a;
        match reg {
            Reg::Vf | Reg::Wg => Some(q),
            Reg::SuppW => Some(q + self.len_w),
            Reg::Exch => self.in_x(q % a).then_some(q + self.len_v),
            Reg::SuppV => Some(if self.in_x(q % a) { q + a + self.len_v } else { q + self.len_v }),
        }
    }
}

pub fn sim_serial(code: &CodeSpec, synd: &SyndromeTable, opts: SimOptions) -> Result<ArchTrace, SimError> {
    run(code, synd, opts, Layout::Division)
}

pub fn sim_serial_inverse_free(code: &CodeSpec, synd: &SyndromeTable, opts: SimOptions) -> Result<ArchTrace, SimError> {
    run(code, synd, opts, Layout::Supplementary)
}

fn run(code: &CodeSpec, synd: &SyndromeTable, opts: SimOptions, layout: Layout) -> Result<ArchTrace, SimError> {
    let curve = &code.curve;
    let field = curve.field();
    let a = curve.a() as usize;
    if a < 2 {
        return Err(SimError::TooFewBlocks);
    }
    let m = code.m;
    let binv = curve.binv() as usize;
    let supp = layout == Layout::Supplementary;
    let mode = if supp { Mode::InverseFree } else { Mode::Division };
    // omega(k): w/g label in slot k
    let omega = |k: usize| if supp { (a - k) % a } else { k };
    let sigma = if supp { (a - binv) % a } else { binv };
    let rows = (m + 3) as usize + usize::from(supp);
    let period = a * rows;
    let d_s = if supp { a } else { 0 };
    let geo = Geometry {
        a,
        len_v: period + sigma - 2 * a - d_s,
        len_w: a * (m + 3) as usize,
        supp,
        sigma,
    };
    let total = (m as u64 + 1) * period as u64;
    let ibar = |i: usize, n: i64| curve.ibar(i as u32, n) as usize;
    let vlabel = |k: usize, n: i64| ibar(omega(k), n);

    let cells = |reg: Reg| match reg {
        Reg::Vf => geo.len_v,
        Reg::Wg => geo.len_w,
        Reg::Exch => a,
        Reg::SuppV | Reg::SuppW => {
            if geo.supp {
                a
            } else {
                0
            }
        }
    };

    let mut regs: Vec<(Reg, VecDeque<FieldElem>)> = Vec::new();
    for reg in [Reg::Vf, Reg::Wg, Reg::Exch, Reg::SuppV, Reg::SuppW] {
        let mut q = VecDeque::with_capacity(cells(reg));
        for p in 0..cells(reg) {
            let val = match geo.clock_of(reg, p) {
                None => FieldElem::ZERO,
                Some(tau) => {
                    let (r, k) = ((tau / a) as i64, tau % a);
                    match reg {
                        Reg::Wg | Reg::SuppW => initial_w(r),
                        _ => initial_v(code, synd, vlabel(k, 0), r)?,
                    }
                }
            };
            q.push_back(val);
        }
        regs.push((reg, q));
    }
    let [vf, wg, exch, supp_v, supp_w] = &mut regs[..] else { unreachable!() };
    let (vf, wg, exch, supp_v, supp_w) = (&mut vf.1, &mut wg.1, &mut exch.1, &mut supp_v.1, &mut supp_w.1);

    let assemble = |n: i64, parts: [(&VecDeque<FieldElem>, Reg); 5], ctrl: &Control| {
        let mut asm = Assembler::new(a, n, m);
        for (q, reg) in parts {
            for (p, &val) in q.iter().enumerate() {
                let Some(tau) = geo.clock_of(reg, p) else { continue };
                let (r, k) = ((tau / a) as i64, tau % a);
                match reg {
                    Reg::Wg | Reg::SuppW => asm.put_w(omega(k), r, val),
                    _ => asm.put_v(vlabel(k, n), r, val),
                }
            }
        }
        asm.finish(ctrl)
    };

    let mut ctrl = Control::new(code);
    let mut meter = Meter::new(2);
    let mut snapshots = Vec::new();
    let mut boundaries = Vec::new();
    let mut latches = Vec::new();
    let mut d = vec![FieldElem::ZERO; a];
    let mut e = vec![FieldElem::ZERO; a];
    let mut dinv = vec![FieldElem::ONE; a];
    let mut keep = vec![true; a];

    for clock in 0..total {
        let n = (clock / period as u64) as i64;
        let tau = (clock % period as u64) as usize;
        let (r, k) = ((tau / a) as i64, tau % a);
        if tau == 0 {
            let parts = [(&*vf, Reg::Vf), (&*wg, Reg::Wg), (&*exch, Reg::Exch), (&*supp_v, Reg::SuppV), (&*supp_w, Reg::SuppW)];
            boundaries.push(assemble(n, parts, &ctrl)?);
        }
        let zero_set = r == m - n && n < m;
        let take_exch = geo.in_x(k);
        if opts.record {
            let mut dumps = vec![
                RegDump { block: 0, name: "vf", values: vf.iter().copied().collect() },
                RegDump { block: 0, name: "wg", values: wg.iter().copied().collect() },
                RegDump { block: 0, name: "exch", values: exch.iter().copied().collect() },
            ];
            if supp {
                dumps.push(RegDump { block: 0, name: "supp_v", values: supp_v.iter().copied().collect() });
                dumps.push(RegDump { block: 0, name: "supp_w", values: supp_w.iter().copied().collect() });
            }
            let sw = Switches { discrepancy: r == 0, update: r > 0 && !keep[k], exchange: take_exch, zero_set };
            snapshots.push(Snapshot { clock, regs: dumps, switches: vec![sw] });
        }

        meter.begin();
        let x = vf.pop_front().expect("vf register");
        let y = wg.pop_front().expect("wg register");
        let (x_out, mut y_out) = if r == 0 {
            let (j, i) = (omega(k), vlabel(k, n));
            let dec = ctrl.decide(code, n, i, j, x, y);
            d[k] = dec.d;
            e[k] = dec.e;
            keep[k] = dec.keep;
            latches.push(Latch { clock, n, label: i, d: dec.d, e: dec.e });
            if supp {
                (x, y)
            } else if dec.keep {
                (FieldElem::ZERO, y)
            } else {
                meter.inv();
                dinv[k] = field.inv(dec.d).expect("replacement needs d != 0");
                meter.mul(1);
                (FieldElem::ZERO, field.mul(dinv[k], x))
            }
        } else {
            let yo = if keep[k] {
                y
            } else if mode == Mode::Division {
                meter.mul(1);
                field.mul(dinv[k], x)
            } else {
                x
            };
            let xo = match mode {
                Mode::InverseFree => {
                    meter.mul(2);
                    field.add(field.mul(e[k], x), field.mul(d[k], y))
                }
                Mode::Division => {
                    meter.mul(1);
                    field.add(x, field.mul(d[k], y))
                }
            };
            (xo, yo)
        };
        if zero_set {
            y_out = FieldElem::ZERO;
        }
        meter.end(clock)?;

        let (v_fwd, w_in) = if supp {
            let sv = supp_v.pop_front().expect("supp_v");
            let sw = supp_w.pop_front().expect("supp_w");
            supp_v.push_back(x_out);
            supp_w.push_back(y_out);
            if (a..2 * a).contains(&tau) {
                let kh = tau - a;
                (FieldElem::ZERO, if keep[kh] { sw } else { sv })
            } else {
                (sv, sw)
            }
        } else {
            (x_out, y_out)
        };
        let ex = exch.pop_front().expect("exchange register");
        exch.push_back(v_fwd);
        vf.push_back(if take_exch { ex } else { v_fwd });
        wg.push_back(w_in);

        if tau == period - 1 {
            ctrl.commit();
        }
    }
    let parts = [(&*vf, Reg::Vf), (&*wg, Reg::Wg), (&*exch, Reg::Exch), (&*supp_v, Reg::SuppV), (&*supp_w, Reg::SuppW)];
    boundaries.push(assemble(m + 1, parts, &ctrl)?);

    let arch = if supp { ArchKind::SerialInverseFree } else { ArchKind::Serial };
    Ok(ArchTrace {
        arch,
        period: period as u64,
        total_clocks: total,
        boundary_states: boundaries,
        g_origin: ctrl.g_origin.clone(),
        latches,
        snapshots,
        registers: RegisterCounts {
            vf: geo.len_v,
            wg: geo.len_w,
            exchange: a,
            supplementary: if supp { 2 * a } else { 0 },
        },
        mult_budget: meter.budget,
        max_mults_per_clock: meter.max,
        mult_uses: meter.uses,
        inv_uses: meter.invs,
        replacements: ctrl.replacements,
    })
}
