use renyi_core::search::{alpha_continuation, minimize_residual};
use renyi_core::store::{load_run, save_run, RunArchive};
use renyi_core::{Alpha, ContinuationSchedule, Objective, RngSeed, SearchConfig};

#[test]
fn loaded_archive_continues_like_the_in_memory_record() {
    // this seed lands in the violating basin at alpha = 2
    let record = minimize_residual(&SearchConfig::new(Alpha::TWO, Objective::Ss, RngSeed::new(1, 2))).unwrap();
    assert!(record.final_residuals.ss_residual < -0.019);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("optimum.json");
    save_run(&RunArchive::new(record.clone()).unwrap(), &path).unwrap();
    let loaded = load_run(&path).unwrap().record;

    let schedule = ContinuationSchedule {
        delta_min: 1e-5,
        ..ContinuationSchedule::new(vec![Alpha::new(1.5).unwrap()], RngSeed::new(6, 0)).unwrap()
    };
    let from_memory = alpha_continuation(&schedule, &record).unwrap();
    let from_disk = alpha_continuation(&schedule, &loaded).unwrap();
    assert_eq!(from_memory, from_disk);
    let stage = from_disk[0].final_residuals.ss_residual;
    assert!(stage < -1e-3 && stage > record.final_residuals.ss_residual, "{stage}");
}
