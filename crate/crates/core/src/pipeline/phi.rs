use crate::algebra::CdNumber;
use crate::error::{Error, Result};

/// Sends each element of `r` to its nearest distinct neighbour in `r`, by
/// exact squared distance; ties go to the canonically smaller element.
///
/// Returned in canonical order of the domain.
pub fn phi_map(r: &[CdNumber]) -> Result<Vec<(CdNumber, CdNumber)>> {
    let mut points = r.to_vec();
    points.sort();
    points.dedup();
    if points.len() < 2 {
        return Err(Error::DegenerateR { size: points.len() });
    }
    Ok(points
        .iter()
        .map(|x| {
            let nearest = points
                .iter()
                .filter(|y| *y != x)
                .map(|y| ((x - y).norm_sq(), y))
                // replace only on a strictly smaller distance
                .fold(None, |best: Option<(_, &CdNumber)>, cand| match best {
                    Some(b) if b.0 <= cand.0 => Some(b),
                    _ => Some(cand),
                })
                .map(|(_, y)| y.clone())
                .expect("at least two points");
            (x.clone(), nearest)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn line(vals: &[i64]) -> Vec<CdNumber> {
        vals.iter().map(|&v| CdNumber::real(4, int(v))).collect()
    }

    fn as_ints(map: &[(CdNumber, CdNumber)]) -> Vec<(i64, i64)> {
        use num_traits::ToPrimitive;
        map.iter()
            .map(|(x, y)| {
                (
                    x.coords()[0].to_integer().to_i64().unwrap(),
                    y.coords()[0].to_integer().to_i64().unwrap(),
                )
            })
            .collect()
    }

    #[test]
    fn two_points_swap() {
        assert_eq!(as_ints(&phi_map(&line(&[2, 1])).unwrap()), vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn nearest_on_the_line() {
        assert_eq!(
            as_ints(&phi_map(&line(&[3, 0, 1])).unwrap()),
            vec![(0, 1), (1, 0), (3, 1)]
        );
    }

    #[test]
    fn ties_go_to_the_smaller_element() {
        assert_eq!(
            as_ints(&phi_map(&line(&[1, -1, 0])).unwrap()),
            vec![(-1, 0), (0, -1), (1, 0)]
        );
        // symmetric triangle in the plane: every pair is equidistant
        let tri = vec![
            CdNumber::from_ints(1, &[0, 0]).unwrap(),
            CdNumber::from_ints(1, &[1, 0]).unwrap(),
            CdNumber::from_ints(1, &[0, 1]).unwrap(),
        ];
        let map = phi_map(&tri).unwrap();
        // canonical order: (0,0) < (0,1) < (1,0)
        assert_eq!(map[0].1, tri[2]);
        assert_eq!(map[1].1, tri[0]);
        assert_eq!(map[2].1, tri[0]);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(phi_map(&line(&[5])), Err(Error::DegenerateR { size: 1 }));
        assert_eq!(phi_map(&line(&[5, 5])), Err(Error::DegenerateR { size: 1 }));
        assert_eq!(phi_map(&[]), Err(Error::DegenerateR { size: 0 }));
    }
}
