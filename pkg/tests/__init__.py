# lowhigh test package
