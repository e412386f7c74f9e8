//! Tube meshes swept along a curve by a moving frame.

use std::f64::consts::PI;
use std::fmt::Write as _;

use thiserror::Error;

use crate::curve::Vec3;
use crate::frames::{FrameKind, FramePath};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("tube radius must be positive, got {0}")]
    Radius(f64),
    #[error("tube needs at least 3 segments, got {0}")]
    Segments(usize),
    #[error("{positions} positions for {frames} frames")]
    LengthMismatch { positions: usize, frames: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TubeMesh {
    pub vertices: Vec<Vec3>,
    /// Zero-based vertex indices, counter-clockwise seen from outside.
    pub faces: Vec<[usize; 4]>,
    pub segments: usize,
}

/// The two unit vectors spanning the normal plane of a frame.
///
/// Frenet and type-1 frames carry them as `e2`, `e3`. A type-2 frame has
/// only `B` in the normal plane; the other vector is `B × T`, with `T`
/// taken from `tangent` and made orthogonal to `B`.
fn normal_plane(kind: FrameKind, e: [Vec3; 3], tangent: &Vec3) -> (Vec3, Vec3) {
    match kind {
        FrameKind::Frenet | FrameKind::Bishop1 => (e[1], e[2]),
        FrameKind::Bishop2 => {
            let b = e[2];
            let t = (tangent - b * b.dot(tangent)).normalize();
            (b.cross(&t), b)
        }
    }
}

/// Ring `i` holds vertices `i·segments .. (i+1)·segments`, vertex `j` at
/// `position_i + r(cos(2πj/n) u_i + sin(2πj/n) v_i)`.
pub fn sweep_tube(
    positions: &[Vec3],
    tangents: &[Vec3],
    path: &FramePath,
    radius: f64,
    segments: usize,
) -> Result<TubeMesh, MeshError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(MeshError::Radius(radius));
    }
    if segments < 3 {
        return Err(MeshError::Segments(segments));
    }
    if positions.len() != path.len() || tangents.len() != path.len() {
        return Err(MeshError::LengthMismatch {
            positions: positions.len(),
            frames: path.len(),
        });
    }
    let mut vertices = Vec::with_capacity(positions.len() * segments);
    for ((p, t), frame) in positions.iter().zip(tangents).zip(&path.frames) {
        let (u, v) = normal_plane(path.kind, frame.vectors(), t);
        for j in 0..segments {
            let (sin, cos) = (2.0 * PI * j as f64 / segments as f64).sin_cos();
            vertices.push(p + (u * cos + v * sin) * radius);
        }
    }
    let mut faces = Vec::with_capacity(positions.len().saturating_sub(1) * segments);
    for i in 0..positions.len().saturating_sub(1) {
        for j in 0..segments {
            let a = i * segments + j;
            let b = i * segments + (j + 1) % segments;
            faces.push([a, b, b + segments, a + segments]);
        }
    }
    Ok(TubeMesh {
        vertices,
        faces,
        segments,
    })
}

impl TubeMesh {
    /// Area-weighted normal of a quad (cross product of its diagonals).
    pub fn face_normal(&self, face: usize) -> Vec3 {
        let [a, b, c, d] = self.faces[face].map(|i| self.vertices[i]);
        (c - a).cross(&(d - b)) * 0.5
    }

    /// Vertex ring `i`.
    pub fn ring(&self, i: usize) -> &[Vec3] {
        &self.vertices[i * self.segments..(i + 1) * self.segments]
    }

    pub fn ring_count(&self) -> usize {
        self.vertices.len() / self.segments
    }

    /// OBJ text with `v x y z` and one-based `f a b c d` lines.
    pub fn to_obj(&self) -> String {
        let mut out = String::with_capacity(self.vertices.len() * 64);
        for v in &self.vertices {
            let _ = writeln!(out, "v {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z);
        }
        for f in &self.faces {
            let _ = writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1);
        }
        out
    }
}
