"""JSON bundles, curve exports, manifests and console reports."""
