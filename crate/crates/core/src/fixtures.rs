//! Small hand-checkable forms used throughout the docs and tests.

use crate::forms::DirichletForm;
use crate::space::FiniteMeasureSpace;

/// Two points of mass 1 joined by an edge of weight 1.
pub fn edge() -> DirichletForm {
    let space = FiniteMeasureSpace::new(vec!["a", "b"], vec![1.0, 1.0]).unwrap();
    DirichletForm::from_edges(space, &[(0, 1, 1.0)], &[0.0, 0.0]).unwrap()
}

/// Four points of mass ¼ with edges a–b (weight 1) and c–d (weight 2).
pub fn twin() -> DirichletForm {
    let space = FiniteMeasureSpace::new(vec!["a", "b", "c", "d"], vec![0.25; 4]).unwrap();
    DirichletForm::from_edges(space, &[(0, 1, 1.0), (2, 3, 2.0)], &[0.0; 4]).unwrap()
}

/// [`edge`] with unit killing at `a`.
pub fn kill() -> DirichletForm {
    let space = FiniteMeasureSpace::new(vec!["a", "b"], vec![1.0, 1.0]).unwrap();
    DirichletForm::from_edges(space, &[(0, 1, 1.0)], &[1.0, 0.0]).unwrap()
}

/// 3×2 grid with uniform mass 1/6 and unit edges along the first coordinate
/// only. Points are ordered `(0,0), (0,1), (1,0), (1,1), (2,0), (2,1)`, so the
/// rows are `{0, 2, 4}` and `{1, 3, 5}`.
pub fn grid() -> DirichletForm {
    let mut points = Vec::new();
    for i in 0..3 {
        for j in 0..2 {
            points.push(format!("({i},{j})"));
        }
    }
    let space = FiniteMeasureSpace::new(points, vec![1.0 / 6.0; 6]).unwrap();
    let edges = [(0, 2, 1.0), (2, 4, 1.0), (1, 3, 1.0), (3, 5, 1.0)];
    DirichletForm::from_edges(space, &edges, &[0.0; 6]).unwrap()
}

/// Disjoint union of [`twin`] (points a–d) and [`kill`] (relabelled e, f).
pub fn twin_plus_kill() -> DirichletForm {
    let space = FiniteMeasureSpace::new(
        vec!["a", "b", "c", "d", "e", "f"],
        vec![0.25, 0.25, 0.25, 0.25, 1.0, 1.0],
    )
    .unwrap();
    let edges = [(0, 1, 1.0), (2, 3, 2.0), (4, 5, 1.0)];
    DirichletForm::from_edges(space, &edges, &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap()
}
