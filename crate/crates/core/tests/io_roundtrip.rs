use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use resistweave::generators;
use resistweave::io::{read_graph, write_graph};

#[test]
fn generated_graphs_survive_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let graphs = [
        generators::complete(9),
        generators::random_regular(40, 7, &mut rng).unwrap().double_cover().unwrap(),
        generators::random_connected_weighted(12, 0.5, 0.01, 100.0, &mut rng).unwrap(),
        generators::petersen().scale_weights(1.0 / 3.0).unwrap(),
    ];
    for (i, g) in graphs.iter().enumerate() {
        let path = dir.path().join(format!("g{i}.txt"));
        write_graph(&path, g).unwrap();
        assert_eq!(&read_graph(&path).unwrap(), g);
    }
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = read_graph(&dir.path().join("absent.txt")).unwrap_err();
    assert!(matches!(err, resistweave::Error::Io(_)));
}
