use piezoloc_demo::Engine;

#[test]
fn engine_simulates_localizes_and_maps() {
    let mut e = Engine::new(1).unwrap();
    assert_eq!(e.pair_labels(), ["0-1", "0-2", "0-3", "1-2", "1-3", "2-3"]);
    let dr = e.simulate(8.0, 5.0, 3.0).unwrap();
    assert_eq!(dr.len(), 6);
    assert!(dr.iter().all(|v| *v > 0.0));

    let p = e.localize(4.0, 6.0, 3.0, 0.0).unwrap();
    assert!(((p.x - 4.0).powi(2) + (p.y - 6.0).powi(2)).sqrt() < 1.0, "{p:?}");

    let map = e.sensitivity_map(0, 3.0, 2.0).unwrap();
    assert_eq!((map.columns, map.rows), (9, 6));
    assert_eq!(map.values.len(), 54);
    assert!(map.values.iter().all(|v| *v >= 0.0));
    assert!(e.sensitivity_map(6, 3.0, 2.0).is_err());
}
