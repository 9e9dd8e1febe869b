//! End-to-end acceptance sweep. Runs without the default harness so each
//! criterion can print a single timed pass/fail line; a nonzero exit code
//! signals any failure.

mod common;

use common::{random_formula, random_program, random_read_once_program, scaling_program};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::process::ExitCode;
use std::time::Instant;
use zsbp::{
    barrington, compile_zs_to_circuit, d_complexity, det_to_zs, gen_family, levelize_zs,
    ro_det_to_zs, ro_zs_to_det, z_complexity, Family, Formula, Semantics,
};

fn run(label: &str, check: impl FnOnce() -> Result<String, String>) -> bool {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    match outcome {
        Ok(detail) if detail.is_empty() => {
            println!("{label}: PASS ({elapsed:.2?})");
            true
        }
        Ok(detail) => {
            println!("{label}: PASS ({elapsed:.2?}) — {detail}");
            true
        }
        Err(reason) => {
            println!("{label}: FAIL ({elapsed:.2?}) — {reason}");
            false
        }
    }
}

/// D and Z values of the two witness families, exact for every n up to 5.
fn complexity_gaps() -> Result<String, String> {
    for n in 1..=5usize {
        let const1 = gen_family(Family::Const1, n, None).map_err(|e| e.to_string())?;
        let and_neg = gen_family(Family::AndOfNegations, n, None).map_err(|e| e.to_string())?;
        let got = (
            d_complexity(&const1).map_err(|e| e.to_string())?.value,
            z_complexity(&const1).map_err(|e| e.to_string())?.value,
            d_complexity(&and_neg).map_err(|e| e.to_string())?.value,
            z_complexity(&and_neg).map_err(|e| e.to_string())?.value,
        );
        if got != (0, n, n, 0) {
            return Err(format!(
                "n={n}: expected D/Z = (0, {n}, {n}, 0), got {got:?}"
            ));
        }
    }
    Ok(String::new())
}

/// Appending the conversion chain costs exactly n nodes and swaps the
/// semantics under which the table is read.
fn chain_conversion() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0xacce_0001);
    for round in 0..100 {
        let n = 1 + round % 8;
        let bp = random_program(&mut rng, n, 40);
        let out = det_to_zs(&bp);
        if out.size() != bp.size() + n {
            return Err(format!(
                "size {} != {} + {n} on round {round}",
                out.size(),
                bp.size()
            ));
        }
        let want = bp.truth_table(Semantics::Det).map_err(|e| e.to_string())?;
        let got = out.truth_table(Semantics::Zs).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("table mismatch on round {round}"));
        }
    }
    Ok(String::new())
}

/// Both read-once conversions stay read-once, respect the s + 2ns size
/// bound, flip the semantics, and compose back to the original table.
fn read_once_conversions() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0xacce_0002);
    for round in 0..100 {
        let n = 1 + round % 8;
        let max_inner = rng.gen_range(1..=12);
        let bp = random_read_once_program(&mut rng, n, max_inner);
        let s = bp.size();
        let det_table = bp.truth_table(Semantics::Det).map_err(|e| e.to_string())?;
        let zs_table = bp.truth_table(Semantics::Zs).map_err(|e| e.to_string())?;

        let to_zs = ro_det_to_zs(&bp).map_err(|e| e.to_string())?;
        let to_det = ro_zs_to_det(&bp).map_err(|e| e.to_string())?;
        for (name, out, want, semantics) in [
            ("det->zs", &to_zs, &det_table, Semantics::Zs),
            ("zs->det", &to_det, &zs_table, Semantics::Det),
        ] {
            if !out.is_read_once() {
                return Err(format!("{name} output re-reads a variable (round {round})"));
            }
            if out.size() > s + 2 * n * s {
                return Err(format!(
                    "{name} size {} exceeds {s} + 2*{n}*{s} (round {round})",
                    out.size()
                ));
            }
            if &out.truth_table(semantics).map_err(|e| e.to_string())? != want {
                return Err(format!("{name} table mismatch (round {round})"));
            }
        }

        let round_trip = ro_zs_to_det(&to_zs).map_err(|e| e.to_string())?;
        if round_trip
            .truth_table(Semantics::Det)
            .map_err(|e| e.to_string())?
            != det_table
        {
            return Err(format!("round trip altered the table (round {round})"));
        }
    }
    Ok(String::new())
}

/// The compiler agrees with direct evaluation, and depth grows by a
/// bounded step each time a width-5 input doubles its length.
fn circuit_compilation() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0xacce_0003);
    for round in 0..30 {
        let n = 1 + round % 8;
        let bp = random_program(&mut rng, n, 40);
        let circuit = compile_zs_to_circuit(&bp).map_err(|e| e.to_string())?;
        let want = bp.truth_table(Semantics::Zs).map_err(|e| e.to_string())?;
        if circuit.truth_table().map_err(|e| e.to_string())? != want {
            return Err(format!("compiled table mismatch on round {round}"));
        }
    }

    let n = 8;
    let mut depths = Vec::new();
    let mut length = 4;
    while length <= 256 {
        // Constant folding collapses some samples, so growth is measured
        // on the deepest of several circuits per length.
        let mut deepest = 0;
        for _ in 0..5 {
            let bp = scaling_program(&mut rng, n, length);
            let lts = levelize_zs(&bp).map_err(|e| e.to_string())?;
            if lts.width() > 5 {
                return Err(format!("width {} > 5 at length {length}", lts.width()));
            }
            let circuit = compile_zs_to_circuit(&bp).map_err(|e| e.to_string())?;
            deepest = deepest.max(circuit.depth());
        }
        depths.push(deepest);
        length *= 2;
    }
    let steps: Vec<usize> = depths
        .windows(2)
        .map(|pair| pair[1].saturating_sub(pair[0]))
        .collect();
    let max_step = steps.iter().copied().max().unwrap_or(0);
    const STEP_LIMIT: usize = 10;
    if max_step > STEP_LIMIT {
        return Err(format!(
            "depth step {max_step} per doubling exceeds {STEP_LIMIT} (depths {depths:?})"
        ));
    }
    Ok(format!(
        "depths {depths:?} for lengths 4..256, at most {max_step} extra depth per doubling (limit {STEP_LIMIT})"
    ))
}

/// Formula to width-5 program to zero-suppressed program to circuit, with
/// the original table surviving the whole trip.
fn formula_pipeline() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0xacce_0005);
    for round in 0..50 {
        let n = 1 + round % 6;
        let formula = random_formula(&mut rng, n, 6, false);
        let want = formula.truth_table();

        let wide = barrington(&formula).map_err(|e| e.to_string())?;
        let width = levelize_zs(&wide).map_err(|e| e.to_string())?.width();
        if width > 5 {
            return Err(format!("simulation width {width} > 5 on round {round}"));
        }
        let zs = det_to_zs(&wide);
        let circuit = compile_zs_to_circuit(&zs).map_err(|e| e.to_string())?;
        if circuit.truth_table().map_err(|e| e.to_string())? != want {
            return Err(format!("pipeline table mismatch on round {round}"));
        }
    }
    Ok(String::new())
}

/// Three spellings of "exactly one of three": the zero-suppression
/// formula, the plain disjunctive normal form, and the generated family.
fn exactly_one_example() -> Result<String, String> {
    let zs_form = Formula::parse("(Z(x1)|(Z(x2)|Z(x3)))", 3).map_err(|e| e.to_string())?;
    let family = gen_family(Family::ExactlyK, 3, Some(1)).map_err(|e| e.to_string())?;
    let dnf = Formula::dnf_of_table(&family).map_err(|e| e.to_string())?;
    let tables = (
        zs_form.truth_table().to_bit_string(),
        dnf.truth_table().to_bit_string(),
        family.to_bit_string(),
    );
    if tables.0 != tables.2 || tables.1 != tables.2 {
        return Err(format!("tables disagree: {tables:?}"));
    }
    Ok(format!("all three spellings give {}", tables.2))
}

fn main() -> ExitCode {
    let mut all_pass = true;
    all_pass &= run("criterion 1 (complexity gaps)", complexity_gaps);
    all_pass &= run("criterion 2 (chain conversion)", chain_conversion);
    all_pass &= run("criterion 3 (read-once conversions)", read_once_conversions);
    all_pass &= run("criterion 4 (circuit compilation)", circuit_compilation);
    all_pass &= run("criterion 5 (formula pipeline)", formula_pipeline);
    all_pass &= run("criterion 6 (exactly-one example)", exactly_one_example);
    println!(
        "criterion 7 (class containments): not directly checkable; \
         constructive content exercised by criteria 2 and 4"
    );
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
