//! Local excise-and-splice surgery on diagrams.
//!
//! Every rewrite (crossing resolution, bubble/square reduction, Reidemeister
//! move) deletes some vertices and edges, then reconnects the open edge ends
//! ("stubs") to each other or to freshly created vertices. Chains of joined
//! edge pieces merge into single edges; a chain that closes on itself becomes
//! a vertex-less circle.
//!
//! Containment re-anchoring: a face that keeps at least one dart keeps its
//! children through that dart. A face whose darts all sat on deleted vertices
//! either was the component's outward region (children go to the component's
//! parent region) or was enclosed by a chain that became a circle (children go
//! inside that circle). Deeply nested loop sites can flatten one containment
//! level; the state functions are insensitive to this, since a circle around
//! any contents contributes the same scalar as a circle beside them.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    CircleDir, CircleId, Dart, Diagram, DiagramError, EdgeId, ItemRef, Region, VertId, VertexKind,
};

/// One side of a join: an open end of a surviving edge (identified by its
/// dart at a deleted vertex), a port exposed by cutting an edge at a
/// surviving vertex, or a port of a vertex created by the surgery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum End {
    Stub(Dart),
    Port(Dart),
    New { idx: usize, port: u8 },
}

/// A local rewrite: delete, cut, create, reconnect.
///
/// `delete_edges` lists edges consumed inside the site (both ends on deleted
/// vertices). `cut_edges` removes edges whose surviving end darts are then
/// rewired through `End::Port` joins. In oriented mode each join is ordered
/// `(from, to)` along the strand flow; spliced edges inherit that
/// orientation.
#[derive(Debug, Clone, Default)]
pub struct Surgery {
    pub delete_verts: Vec<VertId>,
    pub delete_edges: Vec<EdgeId>,
    pub cut_edges: Vec<EdgeId>,
    pub new_verts: Vec<VertexKind>,
    pub joins: Vec<(End, End)>,
}

#[derive(Debug, Clone)]
pub struct SurgeryOutcome {
    pub new_verts: Vec<VertId>,
    pub new_circles: Vec<CircleId>,
}

impl Diagram {
    pub fn apply_surgery(&mut self, s: &Surgery) -> Result<SurgeryOutcome, DiagramError> {
        let fail = |msg: &str| DiagramError::Surgery(msg.to_string());

        for v in &s.delete_verts {
            if !self.verts.contains_key(v) {
                return Err(fail("deleted vertex does not exist"));
            }
        }
        for e in &s.delete_edges {
            if !self.edges.contains_key(e) {
                return Err(fail("deleted edge does not exist"));
            }
        }
        for e in &s.cut_edges {
            if !self.edges.contains_key(e) {
                return Err(fail("cut edge does not exist"));
            }
        }
        let deleted_verts: BTreeSet<VertId> = s.delete_verts.iter().copied().collect();
        let deleted_edges: BTreeSet<EdgeId> = s.delete_edges.iter().copied().collect();
        let cut_edges: BTreeSet<EdgeId> = s.cut_edges.iter().copied().collect();

        // stubs: open ends of surviving edges; exposed ports: ends of cut
        // edges at surviving vertices
        let mut stub_piece: BTreeMap<Dart, EdgeId> = BTreeMap::new();
        let mut exposed: BTreeSet<Dart> = BTreeSet::new();
        for (eid, e) in &self.edges {
            if deleted_edges.contains(eid) {
                if !deleted_verts.contains(&e.tail.vert) || !deleted_verts.contains(&e.head.vert) {
                    return Err(fail("consumed edge has an end outside the site"));
                }
                continue;
            }
            if cut_edges.contains(eid) {
                for d in [e.tail, e.head] {
                    if deleted_verts.contains(&d.vert) {
                        return Err(fail("cut edge ends on a deleted vertex"));
                    }
                    exposed.insert(d);
                }
                continue;
            }
            for d in [e.tail, e.head] {
                if deleted_verts.contains(&d.vert) {
                    stub_piece.insert(d, *eid);
                }
            }
        }

        // joins must cover all stubs, exposed ports, and new ports once each
        let mut join_partner: BTreeMap<End, End> = BTreeMap::new();
        for (a, b) in &s.joins {
            if join_partner.insert(*a, *b).is_some() || join_partner.insert(*b, *a).is_some() {
                return Err(fail("an end is joined twice"));
            }
        }
        for d in stub_piece.keys() {
            if !join_partner.contains_key(&End::Stub(*d)) {
                return Err(fail("a stub is left unjoined"));
            }
        }
        for d in &exposed {
            if !join_partner.contains_key(&End::Port(*d)) {
                return Err(fail("an exposed port is left unjoined"));
            }
        }
        for end in join_partner.keys() {
            match end {
                End::Stub(d) => {
                    if !stub_piece.contains_key(d) {
                        return Err(fail("join references a non-stub dart"));
                    }
                }
                End::Port(d) => {
                    if !exposed.contains(d) {
                        return Err(fail("join references a non-exposed port"));
                    }
                }
                End::New { idx, port } => {
                    let kind = s
                        .new_verts
                        .get(*idx)
                        .ok_or_else(|| fail("join references missing new vertex"))?;
                    if *port >= kind.arity() {
                        return Err(fail("join references out-of-range new port"));
                    }
                }
            }
        }
        for (idx, kind) in s.new_verts.iter().enumerate() {
            for port in 0..kind.arity() {
                if !join_partner.contains_key(&End::New { idx, port }) {
                    return Err(fail("a new port is left unjoined"));
                }
            }
        }

        // site bookkeeping for re-anchoring, captured before mutation
        let old_orbits = self.face_orbits();
        let comps = self.components();
        let site_reps: Vec<VertId> = comps
            .iter()
            .filter(|c| c.iter().any(|v| deleted_verts.contains(v)))
            .map(|c| c[0])
            .collect();
        let site_parent: Region = site_reps
            .first()
            .map(|r| self.placement_of(ItemRef::Component(*r)))
            .unwrap_or(Region::Outer);
        let outer_orbit_anchor: BTreeMap<VertId, Dart> = comps
            .iter()
            .filter_map(|c| {
                let anchor = self.outer_anchor(c)?;
                let orbit = old_orbits.iter().find(|o| o.contains(&anchor))?;
                Some((c[0], orbit[0]))
            })
            .collect();
        let rep_of_vert: BTreeMap<VertId, VertId> = comps
            .iter()
            .flat_map(|c| c.iter().map(move |v| (*v, c[0])))
            .collect();
        let placed_components: Vec<(VertId, Vec<VertId>, Region)> = self
            .placements
            .iter()
            .filter_map(|(item, region)| match item {
                ItemRef::Component(rep) => {
                    let comp = comps.iter().find(|c| c[0] == *rep)?;
                    Some((*rep, comp.clone(), *region))
                }
                _ => None,
            })
            .collect();
        let placed_circles: Vec<(CircleId, Region)> = self
            .placements
            .iter()
            .filter_map(|(item, region)| match item {
                ItemRef::Circle(c) => Some((*c, *region)),
                _ => None,
            })
            .collect();
        let old_marks: Vec<(VertId, Dart)> = self
            .outer_marks.keys().filter_map(|rep| {
                let comp = comps.iter().find(|c| c[0] == *rep)?;
                let anchor = self.outer_anchor(comp)?;
                Some((*rep, anchor))
            })
            .collect();

        // --- structural mutation -----------------------------------------

        let new_vert_ids: Vec<VertId> = s
            .new_verts
            .iter()
            .map(|kind| self.fresh_vertex(*kind))
            .collect();
        for e in &s.delete_edges {
            self.edges.remove(e);
        }
        for e in &s.cut_edges {
            self.edges.remove(e);
        }
        for v in &s.delete_verts {
            self.verts.remove(v);
            self.outer_marks.remove(v);
        }

        // terminal attachment of a join end (everything except stubs)
        let resolve_new = |end: &End| -> Option<Dart> {
            match end {
                End::New { idx, port } => Some(Dart::new(new_vert_ids[*idx], *port)),
                End::Port(d) => Some(*d),
                End::Stub(_) => None,
            }
        };

        // direct edges between terminal ends
        for (a, b) in &s.joins {
            if let (Some(ta), Some(tb)) = (resolve_new(a), resolve_new(b)) {
                self.fresh_edge(ta, tb);
            }
        }

        // walk chains of edge pieces
        #[derive(Clone, Copy)]
        enum Terminal {
            Attached(Dart),
            NewPort(Dart),
        }
        let mut consumed: BTreeSet<EdgeId> = BTreeSet::new();
        let mut new_circles: Vec<CircleId> = Vec::new();
        // (circle, stub darts of the joins forming its cycle)
        let mut circle_join_darts: Vec<(CircleId, Vec<Dart>)> = Vec::new();

        let piece_ends: BTreeMap<EdgeId, (Dart, Dart)> = self
            .edges
            .iter()
            .map(|(id, e)| (*id, (e.tail, e.head)))
            .collect();
        let mut end_piece: BTreeMap<Dart, EdgeId> = BTreeMap::new();
        for (eid, (t, h)) in &piece_ends {
            end_piece.insert(*t, *eid);
            end_piece.insert(*h, *eid);
        }
        let is_stub = |d: &Dart| stub_piece.contains_key(d);

        // chain entries: each chain is entered once, at the piece end nearest
        // its starting terminal
        let mut starts: Vec<(Terminal, Dart)> = Vec::new();
        for (stub, eid) in &stub_piece {
            let (t, h) = piece_ends[eid];
            let other = if t == *stub { h } else { t };
            if !is_stub(&other) {
                starts.push((Terminal::Attached(other), other));
            }
        }
        for (a, b) in &s.joins {
            match (a, b) {
                (End::Stub(d), other) if resolve_new(other).is_some() => {
                    starts.push((Terminal::NewPort(resolve_new(other).unwrap()), *d))
                }
                (other, End::Stub(d)) if resolve_new(other).is_some() => {
                    starts.push((Terminal::NewPort(resolve_new(other).unwrap()), *d))
                }
                _ => {}
            }
        }
        starts.sort_by_key(|(_, d)| *d);

        let mut walk_chain = |start: Terminal, first_entry: Dart| {
            if consumed.contains(&end_piece[&first_entry]) {
                return;
            }
            let mut entry = first_entry;
            let mut chain_forward = true;
            let mut first_name: Option<String> = None;
            let mut chain_edges: Vec<EdgeId> = Vec::new();
            let terminal;
            loop {
                let eid = end_piece[&entry];
                let (t, h) = piece_ends[&eid];
                let far = if t == entry { h } else { t };
                if chain_edges.is_empty() {
                    chain_forward = t == entry;
                    first_name = Some(self.edges[&eid].name.clone());
                } else if self.oriented {
                    debug_assert_eq!(
                        t == entry,
                        chain_forward,
                        "spliced strand has incoherent orientation"
                    );
                }
                chain_edges.push(eid);
                consumed.insert(eid);
                if !is_stub(&far) {
                    terminal = Terminal::Attached(far);
                    break;
                }
                match join_partner[&End::Stub(far)] {
                    End::Stub(next) => {
                        entry = next;
                    }
                    other => {
                        terminal = Terminal::NewPort(resolve_new(&other).unwrap());
                        break;
                    }
                }
            }
            let start_dart = match start {
                Terminal::Attached(d) | Terminal::NewPort(d) => d,
            };
            let end_dart = match terminal {
                Terminal::Attached(d) | Terminal::NewPort(d) => d,
            };
            for eid in &chain_edges {
                self.edges.remove(eid);
            }
            let (tail, head) = if chain_forward {
                (start_dart, end_dart)
            } else {
                (end_dart, start_dart)
            };
            let id = EdgeId(self.next_edge);
            self.next_edge += 1;
            self.edges.insert(
                id,
                super::Edge {
                    name: first_name.unwrap(),
                    tail,
                    head,
                },
            );
        };
        for (start, first_entry) in starts {
            walk_chain(start, first_entry);
        }

        // leftover pieces with stubs form closed cycles -> circles
        loop {
            let next = stub_piece
                .iter()
                .find(|(_, eid)| !consumed.contains(eid) && self.edges.contains_key(eid))
                .map(|(d, e)| (*d, *e));
            let (start_stub, start_eid) = match next {
                Some(x) => x,
                None => break,
            };
            let mut cycle_darts: Vec<Dart> = Vec::new();
            let mut cur_stub = start_stub;
            loop {
                let eid = stub_piece[&cur_stub];
                consumed.insert(eid);
                let (t, h) = piece_ends[&eid];
                let far = if t == cur_stub { h } else { t };
                cycle_darts.push(cur_stub);
                cycle_darts.push(far);
                self.edges.remove(&eid);
                match join_partner[&End::Stub(far)] {
                    End::Stub(next) => {
                        if next == start_stub {
                            break;
                        }
                        cur_stub = next;
                    }
                    _ => unreachable!("cycle reached a terminal attachment"),
                }
            }
            let dir = if self.oriented {
                Some(CircleDir::Ccw)
            } else {
                None
            };
            let cid = self.fresh_circle(dir);
            new_circles.push(cid);
            circle_join_darts.push((cid, cycle_darts));
            let _ = start_eid;
        }

        // --- containment re-anchoring --------------------------------------

        let survives = |d: &Dart| self.verts.contains_key(&d.vert);
        let resolve_region = |region: Region| -> Region {
            match region {
                Region::Face { anchor } => {
                    let old_orbit = old_orbits
                        .iter()
                        .find(|o| o.contains(&anchor))
                        .cloned()
                        .unwrap_or_else(|| vec![anchor]);
                    if let Some(d) = old_orbit.iter().find(|d| survives(d)) {
                        return Region::Face { anchor: *d };
                    }
                    // dead orbit: outward region of its old component?
                    let old_rep = rep_of_vert.get(&anchor.vert);
                    let was_outward = old_rep
                        .and_then(|r| outer_orbit_anchor.get(r))
                        .map(|a| old_orbit.contains(a))
                        .unwrap_or(false);
                    if !was_outward {
                        for (cid, darts) in &circle_join_darts {
                            if darts.iter().any(|d| old_orbit.contains(d)) {
                                return Region::Inside(*cid);
                            }
                        }
                    }
                    site_parent
                }
                r => r,
            }
        };

        self.placements.clear();
        for (old_rep, old_verts, region) in &placed_components {
            let region = resolve_region(*region);
            // distribute onto every surviving fragment of the old component
            let mut new_reps: BTreeSet<VertId> = BTreeSet::new();
            for v in old_verts {
                if self.verts.contains_key(v) {
                    new_reps.insert(self.comp_rep_of(*v));
                }
            }
            for rep in new_reps {
                self.placements.insert(ItemRef::Component(rep), region);
            }
            let _ = old_rep;
        }
        for (cid, region) in &placed_circles {
            if self.circles.contains_key(cid) {
                self.placements
                    .insert(ItemRef::Circle(*cid), resolve_region(*region));
            }
        }
        for cid in &new_circles {
            if site_parent != Region::Outer {
                self.placements.insert(ItemRef::Circle(*cid), site_parent);
            }
        }
        // drop self-referential placements (an item inside its own region)
        let self_placed: Vec<ItemRef> = self
            .placements
            .iter()
            .filter(|(item, region)| match (item, region) {
                (ItemRef::Component(rep), Region::Face { anchor }) => {
                    self.verts.contains_key(&anchor.vert) && self.comp_rep_of(anchor.vert) == *rep
                }
                (ItemRef::Circle(c), Region::Inside(c2)) => c == c2,
                _ => false,
            })
            .map(|(item, _)| *item)
            .collect();
        for item in self_placed {
            self.placements.remove(&item);
        }

        self.outer_marks.clear();
        for (_, anchor) in &old_marks {
            if survives(anchor) {
                let rep = self.comp_rep_of(anchor.vert);
                self.outer_marks.insert(rep, *anchor);
            }
        }

        Ok(SurgeryOutcome {
            new_verts: new_vert_ids,
            new_circles,
        })
    }

    /// Delete a vertex-less circle and move its contents up to where the
    /// circle itself lived.
    pub fn remove_circle_reparent(&mut self, id: CircleId) -> Result<(), DiagramError> {
        if !self.circles.contains_key(&id) {
            return Err(DiagramError::Surgery("no such circle".into()));
        }
        let parent = self.placement_of(ItemRef::Circle(id));
        self.circles.remove(&id);
        self.placements.remove(&ItemRef::Circle(id));
        let inside: Vec<ItemRef> = self
            .placements
            .iter()
            .filter(|(_, r)| **r == Region::Inside(id))
            .map(|(i, _)| *i)
            .collect();
        for item in inside {
            self.place(item, parent);
        }
        Ok(())
    }
}
