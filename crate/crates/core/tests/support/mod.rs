#![allow(dead_code)]

pub mod oracle;

use bead_tsp::{BeadGrid, BeadId, Point};

/// Bead holding `p` by scanning every bead within three rows of the
/// estimated row, with the same tie rule as the grid: largest margin, then
/// larger row, then smaller column.
pub fn locate_by_scan(grid: &BeadGrid, p: Point) -> BeadId {
    let est = ((grid.env.height - p.y) / (0.5 * grid.w)).round() as i64;
    let mut best: Option<(f64, BeadId)> = None;
    for r in (est - 3).max(0)..=(est + 3).min(grid.row_count as i64 - 1) {
        let r = r as usize;
        for c in 0..grid.cols(r) {
            let id = BeadId::new(r, c);
            let m = grid.bead(id).margin(p);
            let better = match best {
                None => true,
                Some((bm, bi)) => {
                    if (m - bm).abs() > 1e-12 {
                        m > bm
                    } else {
                        (id.row, std::cmp::Reverse(id.col)) > (bi.row, std::cmp::Reverse(bi.col))
                    }
                }
            };
            if better {
                best = Some((m, id));
            }
        }
    }
    best.unwrap().1
}
