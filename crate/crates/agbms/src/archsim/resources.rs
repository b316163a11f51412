//! Closed-form hardware cost of the six compared architectures, highest
//! order terms only.

use std::fmt;

use num_rational::Ratio;

use super::ArchKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    Systolic,
    Koetter,
    ParallelBms,
    InverseFree,
    Serial,
    SerialInverseFree,
}

impl Architecture {
    pub const ALL: [Architecture; 6] = [
        Architecture::Systolic,
        Architecture::Koetter,
        Architecture::ParallelBms,
        Architecture::InverseFree,
        Architecture::Serial,
        Architecture::SerialInverseFree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Architecture::Systolic => "systolic",
            Architecture::Koetter => "koetter",
            Architecture::ParallelBms => "parallel_bms",
            Architecture::InverseFree => "inverse_free",
            Architecture::Serial => "serial",
            Architecture::SerialInverseFree => "serial_inverse_free",
        }
    }

    pub fn simulated(self) -> Option<ArchKind> {
        match self {
            Architecture::InverseFree => Some(ArchKind::InverseFree),
            Architecture::Serial => Some(ArchKind::Serial),
            Architecture::SerialInverseFree => Some(ArchKind::SerialInverseFree),
            _ => None,
        }
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Counts may be half-integers (am/2 and friends), hence rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceEstimate {
    pub architecture: Architecture,
    pub multipliers: Ratio<i64>,
    pub inverters: Ratio<i64>,
    pub registers: Ratio<i64>,
    pub total_clocks: Ratio<i64>,
    /// Koetter only: lambda = (m+1)/2 - 1 + a.
    pub lambda: Option<Ratio<i64>>,
    /// Filled in from a simulation trace when one exists.
    pub measured_clocks: Option<u64>,
}

fn int(v: i64) -> Ratio<i64> {
    Ratio::from_integer(v)
}

pub fn resources(arch: Architecture, a: i64, m: i64) -> ResourceEstimate {
    let half = Ratio::new(1, 2);
    let regs = int(2 * a * (m + 2));
    let (mults, invs, registers, clocks, lambda) = match arch {
        Architecture::Systolic => (int(2 * a * m), int(a * m) * half, int((4 * m + 9) * a) * half, int(m + 1), None),
        Architecture::Koetter => {
            let lambda = int(m + 1) * half - 1 + a;
            (int(3 * a), int(a), (lambda * 4 + 5) * a, int((m + 3) * (m + 1)), Some(lambda))
        }
        Architecture::ParallelBms => (int(2 * a), int(a), regs, int((m + 1) * (m + 2)), None),
        Architecture::InverseFree => (int(2 * a), int(0), regs, int((m + 1) * (m + 2)), None),
        Architecture::Serial => (int(2), int(1), regs, int(a * (m + 1) * (m + 2)), None),
        Architecture::SerialInverseFree => (int(2), int(0), regs, int(a * (m + 1) * (m + 2)), None),
    };
    ResourceEstimate {
        architecture: arch,
        multipliers: mults,
        inverters: invs,
        registers,
        total_clocks: clocks,
        lambda,
        measured_clocks: None,
    }
}

fn show(r: &Ratio<i64>) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Plain-text comparison table, one row per architecture.
pub fn bench_table(rows: &[ResourceEstimate]) -> String {
    let mut out = format!(
        "{:<20} {:>11} {:>9} {:>9} {:>12} {:>9}\n",
        "architecture", "multipliers", "inverters", "registers", "total_clocks", "measured"
    );
    for r in rows {
        let measured = r.measured_clocks.map_or_else(|| "-".to_string(), |c| c.to_string());
        out.push_str(&format!(
            "{:<20} {:>11} {:>9} {:>9} {:>12} {:>9}\n",
            r.architecture.name(),
            show(&r.multipliers),
            show(&r.inverters),
            show(&r.registers),
            show(&r.total_clocks),
            measured
        ));
    }
    out
}
