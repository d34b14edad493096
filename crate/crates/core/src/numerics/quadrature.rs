use super::grid::Grid;

/// Trapezoidal weight of one node: the product over axes of the spacing, halved on
/// boundary nodes.
pub fn trapezoid_weight(grid: &Grid, index: &[usize]) -> f64 {
    index
        .iter()
        .enumerate()
        .map(|(axis, &i)| {
            let h = grid.spacing()[axis];
            if i == 0 || i + 1 == grid.shape()[axis] {
                0.5 * h
            } else {
                h
            }
        })
        .product()
}

/// Tensor trapezoidal rule over the grid box. Exact for data that is multilinear
/// on every cell; the integrand vanishes outside the box.
pub fn integrate_grid(grid: &Grid, values: &[f64]) -> f64 {
    assert_eq!(grid.len(), values.len(), "values do not match the grid");
    if grid.dim() == 1 {
        let h = grid.spacing()[0];
        let n = values.len();
        let interior: f64 = values[1..n - 1].iter().sum();
        return h * (interior + 0.5 * (values[0] + values[n - 1]));
    }
    let mut index = vec![0; grid.dim()];
    values
        .iter()
        .enumerate()
        .map(|(flat, &v)| {
            if v == 0.0 {
                return 0.0;
            }
            grid.unravel(flat, &mut index);
            v * trapezoid_weight(grid, &index)
        })
        .sum()
}
