use std::time::{Instant, SystemTime, UNIX_EPOCH};

use dea_frame::buildhull::build_hull;
use dea_frame::ehd::{run_ehd_with, EhdOptions};
use dea_frame::oracle::classify_all;
use dea_frame::phase2::{complement, score_all, Phase2Result};
use dea_frame::preprocess::{ascending_prescore_order, initial_subset_size, preprocess};
use dea_frame::Dataset;

use crate::error::Result;
use crate::io::Manifest;
use crate::record::{Procedure, RunRecord};
use crate::settings::RunSettings;

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub record: RunRecord,
    /// Frame (BuildHull, oracle) or boundary (EHD), ascending.
    pub reference: Vec<usize>,
    pub phase2: Option<Phase2Result>,
}

fn blank_record(
    ds: &Dataset,
    procedure: Procedure,
    settings: &RunSettings,
    manifest: Option<&Manifest>,
) -> RunRecord {
    RunRecord {
        dataset: ds.name().to_string(),
        procedure,
        pivot_rule: settings.solve.pivot_rule,
        algorithm: settings.solve.algorithm,
        n: ds.n(),
        m1: ds.m1(),
        m2: ds.m2(),
        seed: manifest.and_then(|m| m.seed),
        target_density: manifest.and_then(|m| m.target_density),
        m_hat: 0,
        frame_size: manifest.and_then(|m| m.realized_frame),
        boundary_size: None,
        total_lps: 0,
        avg_lp_size: None,
        hyperplane_translations: None,
        inner_products: None,
        translation_time: None,
        subset_size: None,
        lp_size_step2: None,
        num_lps_step2: None,
        lp_size_step3: None,
        num_lps_step3: None,
        lp_size_step4: None,
        num_lps_step4: None,
        aux_lps: None,
        productivity: None,
        preprocess_time: 0.0,
        phase1_time: 0.0,
        phase2_lps: None,
        phase2_lp_size: None,
        phase2_time: None,
        total_time: 0.0,
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    }
}

pub fn run_procedure(
    ds: &Dataset,
    procedure: Procedure,
    settings: &RunSettings,
    manifest: Option<&Manifest>,
) -> Result<RunOutcome> {
    let cfg = &settings.solve;
    let mut rec = blank_record(ds, procedure, settings, manifest);
    let reference = match procedure {
        Procedure::Buildhull => {
            let prep = preprocess(ds);
            let order = ascending_prescore_order(&prep);
            let r = build_hull(ds, &prep.extreme_seed, &order, cfg)?;
            rec.m_hat = r.m_hat;
            rec.frame_size = Some(r.frame.len());
            rec.total_lps = r.lp_count;
            rec.avg_lp_size = Some(r.avg_lp_size);
            rec.hyperplane_translations = Some(r.hyperplane_translations);
            rec.inner_products = Some(r.inner_products);
            rec.translation_time = Some(r.translation_time);
            rec.preprocess_time = prep.time;
            rec.phase1_time = r.wall_time;
            r.frame
        }
        Procedure::Ehd => {
            let prep = preprocess(ds);
            let p = settings
                .subset_size
                .unwrap_or_else(|| initial_subset_size(ds.n()).max(prep.m_hat));
            let opts = EhdOptions {
                include_partial_boundary: settings.include_partial_boundary,
            };
            let r = run_ehd_with(ds, p, &prep, &opts, cfg)?;
            rec.m_hat = r.m_hat;
            rec.boundary_size = Some(r.boundary.len());
            rec.total_lps = r.total_lp_count;
            rec.subset_size = Some(p);
            rec.lp_size_step2 = Some(r.step2.lp_size);
            rec.num_lps_step2 = Some(r.step2.lp_count);
            rec.lp_size_step3 = Some(r.step3.lp_size);
            rec.num_lps_step3 = Some(r.step3.lp_count);
            rec.lp_size_step4 = Some(r.step4.lp_size);
            rec.num_lps_step4 = Some(r.step4.lp_count);
            rec.aux_lps = Some(r.step2.aux_lp_count + r.step3.aux_lp_count + r.step4.aux_lp_count);
            rec.productivity = Some(r.productivity);
            rec.preprocess_time = prep.time;
            rec.phase1_time = r.wall_time;
            r.boundary
        }
        Procedure::Oracle => {
            let start = Instant::now();
            let r = classify_all(ds, cfg)?;
            rec.phase1_time = start.elapsed().as_secs_f64();
            rec.frame_size = Some(r.frame.len());
            rec.boundary_size = Some(r.boundary.len());
            rec.total_lps = r.lp_count;
            rec.avg_lp_size = Some(ds.n() as f64);
            r.frame
        }
    };
    rec.total_time = rec.preprocess_time + rec.phase1_time;

    let phase2 = if settings.phase2 {
        let targets = complement(ds.n(), &reference);
        let p2 = score_all(ds, &reference, &targets, cfg)?;
        rec.phase2_lps = Some(p2.lp_count);
        rec.phase2_lp_size = Some(p2.lp_size);
        rec.phase2_time = Some(p2.time);
        rec.total_time += p2.time;
        Some(p2)
    } else {
        None
    };
    Ok(RunOutcome {
        record: rec,
        reference,
        phase2,
    })
}
