fn main() {
    let <tspan data-hash="1">s1</tspan> = <tspan class="fn" data-hash="0" hash="5">String::from</tspan>("hi");
    let <tspan data-hash="2">s2</tspan> = <tspan data-hash="1">s1</tspan>;
    let mut <tspan data-hash="3">n</tspan> = 1;
    let <tspan data-hash="4">r</tspan> = &mut <tspan data-hash="3">n</tspan>;
    <tspan class="fn" data-hash="0" hash="6">bump</tspan>(<tspan data-hash="4">r</tspan>);
}
