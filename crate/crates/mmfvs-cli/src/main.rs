fn main() {
    let _ = mmfvs::MultiGraph::new();
}
