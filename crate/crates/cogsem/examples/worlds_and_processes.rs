//! Load observations into a model, carve out processes over time segments
//! and space regions, inspect region topology, and audit object
//! conditions.
//!
//! Run with: cargo run --example worlds_and_processes

use std::collections::BTreeMap;

use cogsem::model::{region_topology, CognitiveModel, Region, Segment, TimePoint};
use cogsem::observation::{ObsStatus, ObserverSpec, PrimitiveObservation, ResolutionPower, WorldPath};
use cogsem::value::{ParamValue, Symbol};

fn sighting(t: i64, x: i64, y: i64, result: &str) -> PrimitiveObservation {
    let observer = ObserverSpec::new(
        vec![Symbol::new("cam")],
        ResolutionPower::simple("grid-cam"),
        vec![ParamValue::Int(t), ParamValue::Tuple(vec![0, 0])],
        ObsStatus::Actual,
    )
    .unwrap();
    PrimitiveObservation::new(
        WorldPath::world(&["real"]),
        observer,
        vec![ParamValue::Tuple(vec![x, y])],
        ParamValue::sym(result),
    )
    .unwrap()
}

fn square(x0: i64, y0: i64, side: i64) -> Region {
    let mut r = Region::new();
    for x in x0..x0 + side {
        for y in y0..y0 + side {
            r.insert(vec![x, y]);
        }
    }
    r
}

fn main() {
    // a 2-d world watched over five moments: a stone sits at (1,1)..(3,3),
    // a bird sweeps across the top row
    let mut builder = CognitiveModel::builder().world("real", 2);
    let mut id = 0;
    let mut add = |b: cogsem::model::ModelBuilder, o: PrimitiveObservation| {
        id += 1;
        b.observation(&format!("o{id}"), o).unwrap()
    };
    for t in 0..5 {
        for x in 1..4 {
            for y in 1..4 {
                builder = add(builder, sighting(t, x, y, "stone"));
            }
        }
        builder = add(builder, sighting(t, t, 5, "bird"));
    }

    let stone_region = square(1, 1, 3);
    let stone_map: BTreeMap<TimePoint, Region> =
        (0..5).map(|t| (t, stone_region.clone())).collect();
    let bird_map: BTreeMap<TimePoint, Region> =
        (0..5).map(|t| (t, Region::from([vec![t, 5]]))).collect();
    let segment = Segment::new(0, 4).unwrap();
    let model = builder
        .process("stone", "real", segment, stone_map)
        .process("bird", "real", segment, bird_map)
        .object("stone", true)
        .object("bird", true)
        .build()
        .unwrap();

    let world = Symbol::new("real");
    println!("world 'real' holds {} observations", model.world_of(&world).len());

    let stone = model.process(&Symbol::new("stone")).unwrap();
    println!("stone process: {} members over {}", stone.members.len(), stone.segment);
    let state = stone.state_of(2).unwrap();
    println!("  state at t=2: {} observations", state.len());

    let topo = region_topology(&stone_region);
    println!(
        "  region: connected={} interior={:?} boundary size={}",
        topo.connected,
        topo.interior.iter().collect::<Vec<_>>(),
        topo.boundary.len()
    );

    // the same frame always yields the same process
    let again = model
        .process_at(&world, segment, stone.region_map.clone())
        .unwrap();
    println!("  re-deriving the frame reproduces it: {}", again == *stone);

    for name in ["stone", "bird"] {
        let process = model.process(&Symbol::new(name)).unwrap();
        let report = model.check_object_conditions(process);
        println!(
            "{name}: spatial-difference={} strict-boundary={} disjoint={} strict-start-end={}",
            report.spatial_difference,
            report.strict_boundary,
            report.disjointness,
            report.strict_start_end
        );
    }

    // an ad-hoc frame with an empty region at one moment is a process but
    // a poor object
    let mut flicker_map: BTreeMap<TimePoint, Region> =
        (0..3).map(|t| (t, Region::from([vec![0, 0]]))).collect();
    flicker_map.insert(1, Region::new());
    let flicker = model
        .process_at(&world, Segment::new(0, 2).unwrap(), flicker_map)
        .unwrap();
    let report = model.check_object_conditions(&flicker);
    println!(
        "flickering frame: strict-boundary={} (declared object: {})",
        report.strict_boundary, report.declared_object
    );
}
