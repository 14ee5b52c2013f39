//! Best-effort collection of the host facts recorded in a run context.

use results_model::{RunContext, ScopeEntry};

/// Assembles the run context for a results document.
///
/// `date`, `executable`, `scope_version`, and the scope roster are the
/// caller's to provide; the machine facts (CPU count, nominal frequency,
/// frequency-scaling state) are probed from the host. Probes that fail
/// leave the conservative defaults (`0` / `false`) rather than erroring —
/// a missing sysfs file must never prevent a benchmark run.
pub fn gather_context(
    date: String,
    executable: String,
    scope_version: String,
    scopes: Vec<ScopeEntry>,
) -> RunContext {
    RunContext {
        date,
        executable,
        num_cpus: num_cpus(),
        mhz_per_cpu: mhz_per_cpu(),
        cpu_scaling_enabled: cpu_scaling_enabled(),
        scope_version,
        scopes,
        extra: Default::default(),
    }
}

fn num_cpus() -> u32 {
    std::thread::available_parallelism()
        .map(|n| n.get() as u32)
        .unwrap_or(1)
}

#[cfg(target_os = "linux")]
fn mhz_per_cpu() -> u32 {
    let Ok(cpuinfo) = std::fs::read_to_string("/proc/cpuinfo") else {
        return 0;
    };
    for line in cpuinfo.lines() {
        let Some((key, value)) = line.split_once(':') else {
            continue;
        };
        if key.trim() == "cpu MHz" {
            if let Ok(mhz) = value.trim().parse::<f64>() {
                return mhz as u32;
            }
        }
    }
    0
}

#[cfg(not(target_os = "linux"))]
fn mhz_per_cpu() -> u32 {
    0
}

#[cfg(target_os = "linux")]
fn cpu_scaling_enabled() -> bool {
    // Scaling counts as enabled when a cpufreq governor exists and is
    // anything other than the fixed-frequency "performance" governor.
    match std::fs::read_to_string("/sys/devices/system/cpu/cpu0/cpufreq/scaling_governor") {
        Ok(governor) => governor.trim() != "performance",
        Err(_) => false,
    }
}

#[cfg(not(target_os = "linux"))]
fn cpu_scaling_enabled() -> bool {
    false
}
