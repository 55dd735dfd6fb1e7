//! Per-vertex slicing of each layer. On a rotated classical model the
//! slices at a vertex are the computational basis rotated by that vertex's
//! unitary.

use commham::decompose::{decompose_layers, VertexDecomposition};
use commham::lattice::{Color, LatticeSpec, VertexId};
use commham::model::{gen_rotated_classical, ground_projectors};
use nalgebra::Vector2;

fn main() -> commham::Result<()> {
    let lattice = LatticeSpec::open(4, 4)?;
    let (model, unitaries) = gen_rotated_classical(lattice, 7);
    let decomposition = decompose_layers(&ground_projectors(&model)?)?;

    for color in [Color::Black, Color::White] {
        let layer = decomposition.layer(color);
        let split: Vec<String> = layer.split_vertices().iter().map(|v| v.to_string()).collect();
        println!("{color:?} layer: split at {}", split.join(" "));
    }

    let v = VertexId::new(1, 1);
    let u = &unitaries[lattice.vertex_index(v)];
    if let VertexDecomposition::Split { basis } = decomposition.black.get(v) {
        for (i, e) in basis.iter().enumerate() {
            // overlap with each rotated computational state U|b⟩
            let overlaps: Vec<f64> = (0..2)
                .map(|b| {
                    let col = Vector2::new(u[(0, b)], u[(1, b)]);
                    col.dotc(e).norm_sqr()
                })
                .collect();
            println!("slice {i} at {v}: |<U b|e>|^2 for b = 0, 1: {overlaps:.6?}");
        }
    }
    Ok(())
}
