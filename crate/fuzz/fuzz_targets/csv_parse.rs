#![no_main]
use cosserat_rod::bench::io::*;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = read_csv::<_, CenterlineRow>(data);
    let _ = read_csv::<_, StressRow>(data);
    let _ = read_csv::<_, TipRow>(data);
    let _ = read_csv::<_, MomentRow>(data);
    let _ = read_csv::<_, ConvergenceRow>(data);
    let _ = read_csv::<_, NewtonRow>(data);
    let _ = read_csv::<_, IncrementsRow>(data);
    let _ = read_csv::<_, NewtonStatsRow>(data);
});
