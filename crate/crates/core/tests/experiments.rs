use opsamp_core::experiments::{run, Experiment, ExperimentConfig, Report};

fn in_pool(threads: usize, cfg: &ExperimentConfig) -> Report {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| run(cfg))
}

fn csv_bytes(r: &Report) -> Vec<u8> {
    let dir = tempfile::tempdir().unwrap();
    r.write(dir.path()).unwrap();
    std::fs::read(dir.path().join("metrics.csv")).unwrap()
}

#[test]
fn metrics_do_not_depend_on_thread_count() {
    let cfg = ExperimentConfig::from_json(r#"{"experiment": "norm-equiv", "seed": 4, "operators": 6}"#).unwrap();
    let a = in_pool(1, &cfg);
    let b = in_pool(4, &cfg);
    assert_eq!(csv_bytes(&a), csv_bytes(&b));
    let other = ExperimentConfig { seed: 5, ..cfg };
    assert_ne!(csv_bytes(&a), csv_bytes(&in_pool(2, &other)));
}

#[test]
fn local_subset_is_reproducible() {
    let cfg = ExperimentConfig::from_json(r#"{"experiment": "local-subset", "seed": 2}"#).unwrap();
    assert!(matches!(cfg.experiment, Experiment::LocalSubset(_)));
    let a = in_pool(1, &cfg);
    let b = in_pool(3, &cfg);
    assert!(a.error.is_none());
    assert_eq!(csv_bytes(&a), csv_bytes(&b));
    assert_eq!(a.config, b.config);
}

#[test]
fn shipped_configs_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        let cfg = ExperimentConfig::from_path(&p).unwrap();
        assert_eq!(format!("{}.json", cfg.experiment.name()), p.file_name().unwrap().to_str().unwrap());
        seen += 1;
    }
    assert_eq!(seen, 8);
}
