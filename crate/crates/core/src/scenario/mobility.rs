use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Cluster, MobilityConfig, Motion, Point, Region, Snapshot};
use crate::rng::{substream, Stream};

fn draw_motion(rng: &mut ChaCha8Rng, mobility: &MobilityConfig, region: &Region) -> Motion {
    let waypoint = region.sample(rng);
    let speed = rng.random_range(mobility.speed_min..=mobility.speed_max);
    Motion { waypoint, speed }
}

/// Snapshot 0: CHs at their cluster parents, fresh waypoints and speeds.
pub fn initial_snapshot(
    clusters: &[Cluster],
    td: Vec<Vec<f64>>,
    mobility: &MobilityConfig,
    region: &Region,
    seed: u64,
) -> Snapshot {
    let mut rng = substream(seed, Stream::Mobility, 0);
    let motion = clusters.iter().map(|_| draw_motion(&mut rng, mobility, region)).collect();
    Snapshot { t: 0, ch_positions: clusters.iter().map(|c| c.ch).collect(), td, motion }
}

/// One random-waypoint step of length `speed * dt` per CH. A CH that reaches
/// its waypoint stops there and draws a new waypoint and speed. Demand is
/// carried over unchanged.
pub fn advance_snapshot(prev: &Snapshot, mobility: &MobilityConfig, region: &Region, seed: u64) -> Snapshot {
    let mut rng = substream(seed, Stream::Mobility, prev.t as u64 + 1);
    let mut motion = if prev.motion.len() == prev.ch_positions.len() {
        prev.motion.clone()
    } else {
        prev.ch_positions.iter().map(|_| draw_motion(&mut rng, mobility, region)).collect()
    };
    let mut positions = Vec::with_capacity(prev.ch_positions.len());
    for (pos, m) in prev.ch_positions.iter().zip(motion.iter_mut()) {
        let step = m.speed * mobility.snapshot_duration;
        let dist = pos.dist(&m.waypoint);
        if dist <= step {
            positions.push(m.waypoint);
            *m = draw_motion(&mut rng, mobility, region);
        } else {
            let f = step / dist;
            positions.push(Point::new(pos.x + f * (m.waypoint.x - pos.x), pos.y + f * (m.waypoint.y - pos.y)));
        }
    }
    Snapshot { t: prev.t + 1, ch_positions: positions, td: prev.td.clone(), motion }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::generate_clusters;

    fn start(mobility: &MobilityConfig, seed: u64) -> (Region, Snapshot) {
        let region = Region::default();
        let cl = generate_clusters(&region, 6, 5.0, 500.0, seed).unwrap();
        let td = vec![vec![0.0; 6]; 6];
        let s = initial_snapshot(&cl, td, mobility, &region, seed);
        (region, s)
    }

    #[test]
    fn zero_speed_is_a_fixed_point() {
        let mob = MobilityConfig { speed_min: 0.0, speed_max: 0.0, ..Default::default() };
        let (region, mut s) = start(&mob, 3);
        let p0 = s.ch_positions.clone();
        for _ in 0..10 {
            s = advance_snapshot(&s, &mob, &region, 3);
        }
        assert_eq!(s.ch_positions, p0);
        assert_eq!(s.t, 10);
    }

    #[test]
    fn arrival_clamps_onto_waypoint() {
        let mob = MobilityConfig { speed_min: 1e6, speed_max: 1e6, ..Default::default() };
        let (region, s) = start(&mob, 9);
        let next = advance_snapshot(&s, &mob, &region, 9);
        for (p, m) in next.ch_positions.iter().zip(&s.motion) {
            assert_eq!(*p, m.waypoint);
        }
    }

    #[test]
    fn displacement_bounded_and_inside_region() {
        let mob = MobilityConfig::default();
        let (region, mut s) = start(&mob, 11);
        let bound = mob.speed_max * mob.snapshot_duration;
        for _ in 0..1000 {
            let next = advance_snapshot(&s, &mob, &region, 11);
            for (a, b) in s.ch_positions.iter().zip(&next.ch_positions) {
                assert!(a.dist(b) <= bound + 1e-9);
                assert!(region.contains(b));
            }
            s = next;
        }
    }

    #[test]
    fn advance_is_deterministic() {
        let mob = MobilityConfig::default();
        let (region, s) = start(&mob, 2);
        assert_eq!(advance_snapshot(&s, &mob, &region, 2), advance_snapshot(&s, &mob, &region, 2));
    }
}
