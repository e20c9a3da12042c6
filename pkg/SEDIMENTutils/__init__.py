"""Multiscale laboratory for inertialess particle sedimentation in Stokes flow."""
