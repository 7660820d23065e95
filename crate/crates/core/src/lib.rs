pub mod concat_queue;
pub mod dynamic_locate;
pub mod gen;
pub mod geom;
pub mod oracle;
pub mod planar_map;
pub mod ray_shoot;
pub mod semi_dynamic;
pub mod static_pl;
pub mod subdivision;
pub mod trace;
pub mod union_find;
